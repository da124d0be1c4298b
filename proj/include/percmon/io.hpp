#ifndef PERCMON_IO_HPP_
#define PERCMON_IO_HPP_

#include <string>
#include <vector>

#include "percmon/types.hpp"

namespace percmon {

// Object-list file: JSON-lines, one object state per line with the exact
// field names frame, t, id, x, y, v, theta, l, w, dx, dy, dv, dtheta, dl, dw.
// Margins are optional on read and default to 0.
std::vector<ObjectState> read_object_jsonl(const std::string& path);
void write_object_jsonl(const std::vector<ObjectState>& stream, const std::string& path);

// Ego trajectory: JSON-lines with frame, t, x, y, theta.
std::vector<EgoPose> read_ego_jsonl(const std::string& path);
void write_ego_jsonl(const std::vector<EgoPose>& trajectory, const std::string& path);

// Point-cloud file: CSV with header "frame,x,y", one point per line,
// grouped into one cloud per frame (frames in ascending order).
std::vector<PointCloud2D> read_cloud_csv(const std::string& path);
void write_cloud_csv(const std::vector<PointCloud2D>& clouds, const std::string& path);

// Injection ledger: JSON-lines mirroring the InjectedError fields.
std::vector<InjectedError> read_ledger_jsonl(const std::string& path);
void write_ledger_jsonl(const std::vector<InjectedError>& ledger, const std::string& path);

/// Writes content to a temporary file next to `path` and renames it over
/// `path`, so readers never observe partial output.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace percmon

#endif  // PERCMON_IO_HPP_
