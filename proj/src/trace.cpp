#include "bpdyn/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bpdyn/errors.hpp"

namespace bpdyn::trace {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "k,l1_w,l1_y,energy_E,barrier_B,max_ratio,j_value";

std::string render(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const std::string& path) {
    if (token == "inf") return std::numeric_limits<double>::infinity();
    if (token == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + token + "' in " + path);
    }
    if (used != token.size()) {
        throw IoError("bad numeric field '" + token + "' in " + path);
    }
    return v;
}

const char* variant_name(dynamics::Variant v) {
    switch (v) {
        case dynamics::Variant::unified: return "unified";
        case dynamics::Variant::irls: return "irls";
        case dynamics::Variant::physarum: return "physarum";
        case dynamics::Variant::regularized_irls: return "reg-irls";
    }
    return "unified";
}

dynamics::Variant variant_from(const std::string& name) {
    if (name == "unified") return dynamics::Variant::unified;
    if (name == "irls") return dynamics::Variant::irls;
    if (name == "physarum") return dynamics::Variant::physarum;
    if (name == "reg-irls") return dynamics::Variant::regularized_irls;
    throw IoError("unknown variant '" + name + "'");
}

const char* terminal_name(TerminalKind k) {
    switch (k) {
        case TerminalKind::max_iter: return "max_iter";
        case TerminalKind::target_reached: return "target_reached";
        case TerminalKind::support_collapse: return "support_collapse";
        case TerminalKind::kernel_error: return "kernel_error";
    }
    return "max_iter";
}

TerminalKind terminal_from(const std::string& name) {
    if (name == "max_iter") return TerminalKind::max_iter;
    if (name == "target_reached") return TerminalKind::target_reached;
    if (name == "support_collapse") return TerminalKind::support_collapse;
    if (name == "kernel_error") return TerminalKind::kernel_error;
    throw IoError("unknown terminal status '" + name + "'");
}

// j_value may legally be +inf, which JSON numbers cannot carry; encode
// infinities as strings and decode them back.
json encode_extended(double v) {
    if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
    return json(v);
}

double decode_extended(const json& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw IoError("unknown extended-real token '" + s + "'");
    }
    return j.get<double>();
}

json encode_check(const analysis::CheckResult& c) {
    return json{{"passed", c.passed},
                {"margin", encode_extended(c.margin)},
                {"applicable", c.applicable},
                {"note", c.note}};
}

analysis::CheckResult decode_check(const json& j) {
    analysis::CheckResult c;
    c.passed = j.at("passed").get<bool>();
    c.margin = decode_extended(j.at("margin"));
    c.applicable = j.at("applicable").get<bool>();
    c.note = j.at("note").get<std::string>();
    return c;
}

json encode_row(const analysis::PotentialReport& r) {
    return json{{"k", r.k},
                {"l1_w", r.l1_w},
                {"l1_y", r.l1_y},
                {"energy_E", r.energy_E},
                {"barrier_B", r.barrier_B},
                {"max_ratio", r.max_ratio},
                {"j_value", encode_extended(r.j_value)}};
}

analysis::PotentialReport decode_row(const json& j) {
    analysis::PotentialReport r;
    r.k = j.at("k").get<std::int64_t>();
    r.l1_w = j.at("l1_w").get<double>();
    r.l1_y = j.at("l1_y").get<double>();
    r.energy_E = j.at("energy_E").get<double>();
    r.barrier_B = j.at("barrier_B").get<double>();
    r.max_ratio = j.at("max_ratio").get<double>();
    r.j_value = decode_extended(j.at("j_value"));
    return r;
}

} // namespace

void write_csv(const Trace& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << kCsvHeader << "\n";
    for (const auto& r : t.rows) {
        out << r.k << ',' << render(r.l1_w) << ',' << render(r.l1_y) << ','
            << render(r.energy_E) << ',' << render(r.barrier_B) << ','
            << render(r.max_ratio) << ',' << render(r.j_value) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<analysis::PotentialReport> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw IoError("unexpected CSV header in " + path);
    }
    std::vector<analysis::PotentialReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string token;
        std::vector<std::string> parts;
        while (std::getline(fields, token, ',')) parts.push_back(token);
        if (parts.size() != 7) {
            throw IoError("expected 7 fields, got " + std::to_string(parts.size()) +
                          " in " + path);
        }
        analysis::PotentialReport r;
        try {
            r.k = std::stoll(parts[0]);
        } catch (const std::exception&) {
            throw IoError("bad iteration index '" + parts[0] + "' in " + path);
        }
        r.l1_w = parse_double(parts[1], path);
        r.l1_y = parse_double(parts[2], path);
        r.energy_E = parse_double(parts[3], path);
        r.barrier_B = parse_double(parts[4], path);
        r.max_ratio = parse_double(parts[5], path);
        r.j_value = parse_double(parts[6], path);
        rows.push_back(r);
    }
    return rows;
}

void write_json(const Trace& t, const std::string& path) {
    json doc;
    doc["schema"] = 1;
    doc["instance_id"] = t.instance_id;
    doc["config"] = json{{"variant", variant_name(t.config.variant)},
                         {"h", t.config.h},
                         {"eta", t.config.eta},
                         {"zero_clamp", t.config.zero_clamp}};
    doc["rows"] = json::array();
    for (const auto& r : t.rows) doc["rows"].push_back(encode_row(r));
    doc["iterates"] = json::array();
    for (const auto& y : t.iterates) {
        json row = json::array();
        for (Index i = 0; i < y.size(); ++i) row.push_back(y[i]);
        doc["iterates"].push_back(std::move(row));
    }
    doc["terminal_status"] = json{{"kind", terminal_name(t.terminal_status.kind)},
                                  {"message", t.terminal_status.message}};
    if (t.oracle) {
        json opt = json::array();
        for (Index i = 0; i < t.oracle->optimizer.size(); ++i) {
            opt.push_back(t.oracle->optimizer[i]);
        }
        doc["oracle"] = json{{"optimal_value", t.oracle->optimal_value},
                             {"optimizer", std::move(opt)},
                             {"unique", t.oracle->unique},
                             {"bases_examined", t.oracle->bases_examined}};
    }
    doc["checks"] = json::array();
    for (const auto& c : t.checks) {
        doc["checks"].push_back(json{{"k", c.k},
                                     {"norm_drop", encode_check(c.norm_drop)},
                                     {"barrier", encode_check(c.barrier)},
                                     {"energy_identity", encode_check(c.energy_identity)}});
    }
    doc["timestamp"] = t.timestamp;

    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

Trace read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("cannot parse ") + path + ": " + e.what());
    }
    try {
        if (doc.at("schema").get<int>() != 1) {
            throw IoError("unsupported schema version in " + path);
        }
        Trace t;
        t.instance_id = doc.at("instance_id").get<std::string>();
        const json& cfg = doc.at("config");
        t.config.variant = variant_from(cfg.at("variant").get<std::string>());
        t.config.h = cfg.at("h").get<double>();
        t.config.eta = cfg.at("eta").get<double>();
        t.config.zero_clamp = cfg.at("zero_clamp").get<double>();
        for (const auto& r : doc.at("rows")) t.rows.push_back(decode_row(r));
        for (const auto& row : doc.at("iterates")) {
            Vector y(static_cast<Index>(row.size()));
            Index i = 0;
            for (const auto& v : row) y[i++] = v.get<double>();
            t.iterates.push_back(std::move(y));
        }
        const json& ts = doc.at("terminal_status");
        t.terminal_status.kind = terminal_from(ts.at("kind").get<std::string>());
        t.terminal_status.message = ts.at("message").get<std::string>();
        if (doc.contains("oracle")) {
            const json& o = doc.at("oracle");
            oracle::OracleResult res;
            res.optimal_value = o.at("optimal_value").get<double>();
            const json& opt = o.at("optimizer");
            res.optimizer.resize(static_cast<Index>(opt.size()));
            Index i = 0;
            for (const auto& v : opt) res.optimizer[i++] = v.get<double>();
            res.unique = o.at("unique").get<bool>();
            res.bases_examined = o.at("bases_examined").get<std::uint64_t>();
            t.oracle = std::move(res);
        }
        for (const auto& c : doc.at("checks")) {
            StepChecks sc;
            sc.k = c.at("k").get<std::int64_t>();
            sc.norm_drop = decode_check(c.at("norm_drop"));
            sc.barrier = decode_check(c.at("barrier"));
            sc.energy_identity = decode_check(c.at("energy_identity"));
            t.checks.push_back(std::move(sc));
        }
        t.timestamp = doc.value("timestamp", "");
        return t;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed trace in ") + path + ": " + e.what());
    }
}

} // namespace bpdyn::trace
