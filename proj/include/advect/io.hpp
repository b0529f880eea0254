#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "advect/errors.hpp"
#include "advect/runner.hpp"

namespace advect {

/// Shortest-possible-is-not-wanted: numbers serialize with 17 significant
/// digits so identical runs produce byte-identical files.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_number(const std::string& v, const std::string& key) {
    const std::string t = trim(v);
    double out = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [end, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || end != last)
        throw ConfigError("key '" + key + "': malformed number '" + t + "'");
    return out;
}

inline int parse_int(const std::string& v, const std::string& key) {
    const std::string t = trim(v);
    int out = 0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    auto [end, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || end != last)
        throw ConfigError("key '" + key + "': malformed integer '" + t + "'");
    return out;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Loads a line-oriented `key = value` run configuration. Exactly the
/// documented keys are accepted; unknown or duplicate keys are errors, so a
/// typo cannot silently change a replication run. Blank lines and lines
/// starting with '#' are ignored.
inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());

    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (!kv.emplace(key, value).second)
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
    }

    static const char* known[] = {"grid.a",   "grid.b",  "grid.nx", "time.t_end",
                                  "time.nt",  "initial", "velocity", "scheme",
                                  "boundary", "sign",    "snapshot_every", "rk_dt_divisor"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError(path.string() + ": unknown key '" + key + "'");
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError(path.string() + ": missing required key '" + std::string(key) + "'");
        return it->second;
    };

    RunConfig cfg;
    cfg.grid_a = detail::parse_number(need("grid.a"), "grid.a");
    cfg.grid_b = detail::parse_number(need("grid.b"), "grid.b");
    cfg.grid_nx = detail::parse_int(need("grid.nx"), "grid.nx");
    cfg.t_end = detail::parse_number(need("time.t_end"), "time.t_end");
    cfg.nt = detail::parse_int(need("time.nt"), "time.nt");
    cfg.initial = need("initial");
    cfg.velocity = need("velocity");
    cfg.scheme = need("scheme");
    cfg.boundary = boundary_from_token(need("boundary"));
    cfg.sign = kv.count("sign") ? sign_from_token(kv.at("sign")) : SignConvention::PaperFaithful;
    if (kv.count("snapshot_every"))
        cfg.snapshot_every = detail::parse_int(kv.at("snapshot_every"), "snapshot_every");
    if (kv.count("rk_dt_divisor"))
        cfg.rk_dt_divisor = detail::parse_int(kv.at("rk_dt_divisor"), "rk_dt_divisor");
    validate(cfg);
    return cfg;
}

inline std::string snapshot_filename(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snap_%06d.csv", step);
    return buf;
}

inline void write_snapshot_csv(const std::filesystem::path& path, const WaveField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "x,phi\n";
    for (int i = 0; i <= field.grid.nx; ++i)
        out << fmt17(field.grid.point(i)) << ','
            << fmt17(field.values[static_cast<std::size_t>(i)]) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

/// Manifest JSON is emitted by hand: key order is fixed as documented and
/// numbers use fmt17, which keeps diffs byte-stable across runs.
inline void write_manifest(const std::filesystem::path& path, const RunManifest& man) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const RunConfig& c = man.config;
    out << "{\n";
    out << "  \"config\": {\n";
    out << "    \"grid.a\": " << fmt17(c.grid_a) << ",\n";
    out << "    \"grid.b\": " << fmt17(c.grid_b) << ",\n";
    out << "    \"grid.nx\": " << c.grid_nx << ",\n";
    out << "    \"time.t_end\": " << fmt17(c.t_end) << ",\n";
    out << "    \"time.nt\": " << c.nt << ",\n";
    out << "    \"initial\": \"" << detail::json_escape(c.initial) << "\",\n";
    out << "    \"velocity\": \"" << detail::json_escape(c.velocity) << "\",\n";
    out << "    \"scheme\": \"" << detail::json_escape(c.scheme) << "\",\n";
    out << "    \"boundary\": \"" << detail::json_escape(to_token(c.boundary)) << "\",\n";
    out << "    \"sign\": \"" << to_token(c.sign) << "\",\n";
    out << "    \"snapshot_every\": " << effective_snapshot_every(c) << ",\n";
    out << "    \"rk_dt_divisor\": " << c.rk_dt_divisor << "\n";
    out << "  },\n";
    out << "  \"nu_max\": " << fmt17(man.nu_max) << ",\n";
    out << "  \"snapshots\": [\n";
    for (std::size_t k = 0; k < man.snapshots.size(); ++k) {
        const auto& s = man.snapshots[k];
        out << "    {\"step\": " << s.step << ", \"time\": " << fmt17(s.time)
            << ", \"tv\": " << fmt17(s.tv);
        if (s.l2_vs_oracle) out << ", \"l2_vs_oracle\": " << fmt17(*s.l2_vs_oracle);
        if (s.linf_vs_oracle) out << ", \"linf_vs_oracle\": " << fmt17(*s.linf_vs_oracle);
        out << (k + 1 < man.snapshots.size() ? "},\n" : "}\n");
    }
    out << "  ],\n";
    out << "  \"blown_up\": " << (man.blown_up ? "true" : "false") << ",\n";
    out << "  \"final_time_reached\": " << fmt17(man.final_time_reached) << ",\n";
    out << "  \"drift_direction\": " << man.drift_direction << "\n";
    out << "}\n";
    if (!out) throw IoError("write failed: " + path.string());
}

/// Writes one snapshot CSV per persisted step plus manifest.json into
/// out_dir. Returns the written paths. Repeated invocations on identical
/// inputs produce bit-identical files.
inline std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                        const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());
    std::vector<std::filesystem::path> written;
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        const auto path = out_dir / snapshot_filename(result.manifest.snapshots[k].step);
        write_snapshot_csv(path, result.snapshots[k]);
        written.push_back(path);
    }
    const auto mpath = out_dir / "manifest.json";
    write_manifest(mpath, result.manifest);
    written.push_back(mpath);
    return written;
}

inline void write_compare_csv(const std::filesystem::path& path, const CompareResult& cmp) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "step,time,tv_a,tv_b,l2_diff,l2_a_vs_oracle,l2_b_vs_oracle\n";
    for (const auto& r : cmp.rows) {
        out << r.step << ',' << fmt17(r.time) << ',' << fmt17(r.tv_a) << ',' << fmt17(r.tv_b)
            << ',' << fmt17(r.l2_diff) << ',';
        if (r.l2_a_vs_oracle) out << fmt17(*r.l2_a_vs_oracle);
        out << ',';
        if (r.l2_b_vs_oracle) out << fmt17(*r.l2_b_vs_oracle);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace advect
