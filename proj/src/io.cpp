#include "percmon/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace percmon {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");
    return in;
}

ordered_json parse_line(const std::string& line, const std::string& path, size_t lineno) {
    try {
        return ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
}

std::vector<ObjectState> read_object_jsonl(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<ObjectState> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const ordered_json j = parse_line(line, path, lineno);
        ObjectState o;
        try {
            o.frame = j.at("frame").get<std::int64_t>();
            o.t = j.at("t").get<double>();
            o.id = j.at("id").get<std::int64_t>();
            o.x = j.at("x").get<double>();
            o.y = j.at("y").get<double>();
            o.v = j.at("v").get<double>();
            o.theta = j.at("theta").get<double>();
            o.l = j.at("l").get<double>();
            o.w = j.at("w").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        o.dx = j.value("dx", 0.0);
        o.dy = j.value("dy", 0.0);
        o.dv = j.value("dv", 0.0);
        o.dtheta = j.value("dtheta", 0.0);
        o.dl = j.value("dl", 0.0);
        o.dw = j.value("dw", 0.0);
        if (!std::isfinite(o.x) || !std::isfinite(o.y) || !std::isfinite(o.theta) ||
            o.l <= 0.0 || o.w <= 0.0 || o.v < 0.0) {
            throw IoError(path + ":" + std::to_string(lineno) + ": invalid object state");
        }
        out.push_back(o);
    }
    return out;
}

void write_object_jsonl(const std::vector<ObjectState>& stream, const std::string& path) {
    std::ostringstream buf;
    for (const ObjectState& o : stream) {
        ordered_json j;
        j["frame"] = o.frame;
        j["t"] = o.t;
        j["id"] = o.id;
        j["x"] = o.x;
        j["y"] = o.y;
        j["v"] = o.v;
        j["theta"] = o.theta;
        j["l"] = o.l;
        j["w"] = o.w;
        j["dx"] = o.dx;
        j["dy"] = o.dy;
        j["dv"] = o.dv;
        j["dtheta"] = o.dtheta;
        j["dl"] = o.dl;
        j["dw"] = o.dw;
        buf << j.dump() << '\n';
    }
    atomic_write_text(path, buf.str());
}

std::vector<EgoPose> read_ego_jsonl(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<EgoPose> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const ordered_json j = parse_line(line, path, lineno);
        EgoPose e;
        try {
            e.frame = j.at("frame").get<std::int64_t>();
            e.t = j.at("t").get<double>();
            e.x = j.at("x").get<double>();
            e.y = j.at("y").get<double>();
            e.theta = j.at("theta").get<double>();
        } catch (const nlohmann::json::exception& ex) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
        out.push_back(e);
    }
    return out;
}

void write_ego_jsonl(const std::vector<EgoPose>& trajectory, const std::string& path) {
    std::ostringstream buf;
    for (const EgoPose& e : trajectory) {
        ordered_json j;
        j["frame"] = e.frame;
        j["t"] = e.t;
        j["x"] = e.x;
        j["y"] = e.y;
        j["theta"] = e.theta;
        buf << j.dump() << '\n';
    }
    atomic_write_text(path, buf.str());
}

std::vector<PointCloud2D> read_cloud_csv(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<PointCloud2D> out;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty point-cloud file");
    if (line != "frame,x,y") throw IoError(path + ": expected header frame,x,y");
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        long long frame;
        double x, y;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf", &frame, &x, &y) != 3 ||
            !std::isfinite(x) || !std::isfinite(y)) {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad point row");
        }
        if (out.empty() || out.back().frame != frame) {
            out.push_back(PointCloud2D{frame, {}});
        }
        out.back().points.push_back({x, y});
    }
    return out;
}

void write_cloud_csv(const std::vector<PointCloud2D>& clouds, const std::string& path) {
    std::ostringstream buf;
    buf << "frame,x,y\n";
    for (const PointCloud2D& cloud : clouds) {
        for (const Vec2& p : cloud.points) {
            buf << cloud.frame << ',' << format_double(p.x) << ',' << format_double(p.y)
                << '\n';
        }
    }
    atomic_write_text(path, buf.str());
}

std::vector<InjectedError> read_ledger_jsonl(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<InjectedError> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const ordered_json j = parse_line(line, path, lineno);
        InjectedError e;
        try {
            e.frame = j.at("frame").get<std::int64_t>();
            e.object_id = j.at("object_id").get<std::int64_t>();
            e.kind = error_kind_from_string(j.at("kind").get<std::string>());
            e.magnitude = j.at("magnitude").get<double>();
        } catch (const nlohmann::json::exception& ex) {
            throw IoError(path + ":" + std::to_string(lineno) + ": " + ex.what());
        }
        e.dx_applied = j.value("dx_applied", 0.0);
        e.dy_applied = j.value("dy_applied", 0.0);
        e.dv_applied = j.value("dv_applied", 0.0);
        e.clamped = j.value("clamped", false);
        out.push_back(e);
    }
    return out;
}

void write_ledger_jsonl(const std::vector<InjectedError>& ledger, const std::string& path) {
    std::ostringstream buf;
    for (const InjectedError& e : ledger) {
        ordered_json j;
        j["frame"] = e.frame;
        j["object_id"] = e.object_id;
        j["kind"] = to_string(e.kind);
        j["magnitude"] = e.magnitude;
        const bool speed = e.kind == ErrorKind::SpeedPermanent ||
                           e.kind == ErrorKind::SpeedTransient;
        if (speed) {
            j["dv_applied"] = e.dv_applied;
        } else {
            j["dx_applied"] = e.dx_applied;
            j["dy_applied"] = e.dy_applied;
        }
        if (e.clamped) j["clamped"] = true;
        buf << j.dump() << '\n';
    }
    atomic_write_text(path, buf.str());
}

}  // namespace percmon
