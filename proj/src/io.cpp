#include "trajkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajkit/error.hpp"

namespace trajkit {

FileFormat format_from_name(const std::string& name) {
    if (name == "tum") return FileFormat::tum;
    if (name == "csv") return FileFormat::csv;
    throw InputError("unknown trajectory format: " + name);
}

namespace {

std::vector<std::string> split_fields(const std::string& line, FileFormat format) {
    std::vector<std::string> fields;
    if (format == FileFormat::tum) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
    } else {
        std::string tok;
        std::istringstream ss(line);
        while (std::getline(ss, tok, ',')) {
            // trim surrounding whitespace
            const auto b = tok.find_first_not_of(" \t\r");
            const auto e = tok.find_last_not_of(" \t\r");
            fields.push_back(b == std::string::npos ? "" : tok.substr(b, e - b + 1));
        }
    }
    return fields;
}

double parse_double(const std::string& s, int line_no) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InputError("malformed line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v))
        throw InputError("malformed line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

Trajectory load_trajectory(const std::string& path, FileFormat format) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);

    Trajectory t;
    bool any_rotation = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;

        const auto fields = split_fields(line, format);
        const bool position_only = format == FileFormat::csv && fields.size() == 4;
        if (fields.size() != 8 && !position_only) {
            throw InputError("malformed line " + std::to_string(line_no) + ": expected 8 fields" +
                             (format == FileFormat::csv ? " (or 4 for position-only)" : "") +
                             ", got " + std::to_string(fields.size()));
        }

        const double stamp = parse_double(fields[0], line_no);
        if (!t.timestamps.empty() && stamp <= t.timestamps.back()) {
            throw InputError("line " + std::to_string(line_no) +
                             ": timestamps must be strictly increasing");
        }
        t.timestamps.push_back(stamp);
        t.positions.emplace_back(parse_double(fields[1], line_no), parse_double(fields[2], line_no),
                                 parse_double(fields[3], line_no));

        if (!position_only) {
            const double qx = parse_double(fields[4], line_no);
            const double qy = parse_double(fields[5], line_no);
            const double qz = parse_double(fields[6], line_no);
            const double qw = parse_double(fields[7], line_no);
            const double norm = std::sqrt(qx * qx + qy * qy + qz * qz + qw * qw);
            if (std::abs(norm - 1.0) > 1e-3) {
                throw InputError("line " + std::to_string(line_no) + ": quaternion norm " +
                                 std::to_string(norm) + " too far from 1");
            }
            t.rotations.emplace_back(qw, qx, qy, qz);  // constructor renormalizes
            any_rotation = true;
        } else if (any_rotation) {
            throw InputError("line " + std::to_string(line_no) +
                             ": mixed position-only and full-pose rows");
        }
    }
    if (t.positions.empty()) throw InputError("empty trajectory: " + path);
    if (!any_rotation) t.rotations.clear();
    if (any_rotation && t.rotations.size() != t.positions.size())
        throw InputError("mixed position-only and full-pose rows in " + path);
    return t;
}

void save_trajectory(const Trajectory& t, const std::string& path, FileFormat format) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    const char sep = format == FileFormat::tum ? ' ' : ',';

    char buf[256];
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double stamp = t.has_timestamps() ? t.timestamps[i] : static_cast<double>(i);
        const Vec3& p = t.positions[i];
        if (t.has_rotations()) {
            const Rotation& r = t.rotations[i];
            std::snprintf(buf, sizeof(buf),
                          "%.9g%c%.9g%c%.9g%c%.9g%c%.9g%c%.9g%c%.9g%c%.9g\n", stamp, sep, p.x(),
                          sep, p.y(), sep, p.z(), sep, r.x(), sep, r.y(), sep, r.z(), sep, r.w());
        } else {
            std::snprintf(buf, sizeof(buf), "%.9g%c%.9g%c%.9g%c%.9g\n", stamp, sep, p.x(), sep,
                          p.y(), sep, p.z());
        }
        out << buf;
    }
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_timestamp_matches(
    const std::vector<double>& gt_times, const std::vector<double>& est_times, double tolerance) {
    struct Cand {
        double dt;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < gt_times.size(); ++i) {
        for (std::size_t j = 0; j < est_times.size(); ++j) {
            const double dt = std::abs(gt_times[i] - est_times[j]);
            if (dt <= tolerance) cands.push_back({dt, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dt != b.dt) return a.dt < b.dt;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<bool> used_gt(gt_times.size(), false), used_est(est_times.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& c : cands) {
        if (used_gt[c.i] || used_est[c.j]) continue;
        used_gt[c.i] = used_est[c.j] = true;
        pairs.emplace_back(c.i, c.j);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

Association associate(const Trajectory& gt, const Trajectory& est, AssocMode mode,
                      double tolerance) {
    Association assoc;
    assoc.mode = mode;
    assoc.tolerance = tolerance;

    if (mode == AssocMode::index) {
        if (gt.size() != est.size())
            throw InputError("index association requires equal lengths (" +
                             std::to_string(gt.size()) + " vs " + std::to_string(est.size()) + ")");
        for (std::size_t i = 0; i < gt.size(); ++i) assoc.pairs.emplace_back(i, i);
    } else {
        if (!gt.has_timestamps() || !est.has_timestamps())
            throw InputError("timestamp association requires timestamps on both files");
        assoc.pairs = greedy_timestamp_matches(gt.timestamps, est.timestamps, tolerance);
    }

    if (assoc.pairs.empty()) throw DegenerateError("association produced no matches");
    if (assoc.pairs.size() < 4)
        throw DegenerateError("association produced fewer than 4 matched pairs (" +
                              std::to_string(assoc.pairs.size()) + ")");
    return assoc;
}

std::pair<Trajectory, Trajectory> apply_association(const Trajectory& gt, const Trajectory& est,
                                                    const Association& assoc) {
    Trajectory g, e;
    for (const auto& [i, j] : assoc.pairs) {
        if (gt.has_positions()) g.positions.push_back(gt.positions[i]);
        if (gt.has_rotations()) g.rotations.push_back(gt.rotations[i]);
        if (gt.has_timestamps()) g.timestamps.push_back(gt.timestamps[i]);
        if (est.has_positions()) e.positions.push_back(est.positions[j]);
        if (est.has_rotations()) e.rotations.push_back(est.rotations[j]);
        if (est.has_timestamps()) e.timestamps.push_back(est.timestamps[j]);
    }
    return {std::move(g), std::move(e)};
}

}  // namespace trajkit
