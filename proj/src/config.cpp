#include "kaclab/config.hpp"

#include "kaclab/errors.hpp"

#include <fstream>

namespace kaclab {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw config_error(field + ": " + what);
}

const Json& need(const Json& j, const std::string& key, const std::string& field) {
    if (!j.is_object() || !j.contains(key)) fail(field + "." + key, "missing required field");
    return j.at(key);
}

uint64_t as_u64(const Json& j, const std::string& field) {
    if (!j.is_number_unsigned() && !j.is_number_integer()) fail(field, "expected an integer");
    int64_t v = j.get<int64_t>();
    if (v < 0) fail(field, "expected a non-negative integer");
    return uint64_t(v);
}

std::string as_str(const Json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
}

} // namespace

const Json& ExperimentConfig::at(const std::string& key) const {
    if (!raw.contains(key)) throw config_error(key + ": missing required field");
    return raw.at(key);
}

Rational parse_rational_field(const Json& j, const std::string& field) {
    try {
        if (j.is_number_integer()) return Rational(j.get<int64_t>());
        if (j.is_string()) return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
    fail(field, "expected an integer or a \"p/q\" string");
}

std::vector<Rational> parse_rationals(const Json& j, size_t n, const std::string& field) {
    if (!j.is_array()) fail(field, "expected an array");
    if (n != 0 && j.size() != n)
        fail(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
    std::vector<Rational> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_rational_field(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

Group parse_group(const Json& j, const std::string& field) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "Z") return Group::z(1);
        if (s.rfind("Z^", 0) == 0) {
            try {
                return Group::z(std::stoi(s.substr(2)));
            } catch (const std::exception& e) {
                fail(field, e.what());
            }
        }
        fail(field, "unknown group \"" + s + "\" (use \"Z\", \"Z^d\", or {\"cyclic\": [...]})");
    }
    if (j.is_object() && j.contains("cyclic")) {
        const Json& orders = j.at("cyclic");
        if (!orders.is_array() || orders.empty()) fail(field + ".cyclic", "expected a non-empty array");
        std::vector<int64_t> o;
        for (size_t i = 0; i < orders.size(); ++i) {
            if (!orders[i].is_number_integer()) fail(field + ".cyclic", "orders must be integers");
            o.push_back(orders[i].get<int64_t>());
        }
        try {
            return Group::product_of_cyclic(std::move(o));
        } catch (const std::exception& e) {
            fail(field + ".cyclic", e.what());
        }
    }
    fail(field, "expected \"Z\", \"Z^d\", or {\"cyclic\": [...]}");
}

FiniteSystem parse_finite_system(const Json& j, const std::string& field) {
    Group g = parse_group(need(j, "group", field), field + ".group");
    std::vector<Rational> masses = parse_rationals(need(j, "masses", field), 0, field + ".masses");
    const Json& gens = need(j, "generators", field);
    if (!gens.is_array()) fail(field + ".generators", "expected an array of permutations");
    std::vector<std::vector<uint32_t>> perms;
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const Json& p = gens[gi];
        std::string pf = field + ".generators[" + std::to_string(gi) + "]";
        if (!p.is_array()) fail(pf, "expected a permutation array");
        std::vector<uint32_t> perm;
        for (size_t x = 0; x < p.size(); ++x) {
            if (!p[x].is_number_integer() || p[x].get<int64_t>() < 0)
                fail(pf, "entries must be non-negative point indices");
            perm.push_back(p[x].get<uint32_t>());
        }
        perms.push_back(std::move(perm));
    }
    try {
        return FiniteSystem(std::move(g), std::move(masses), std::move(perms));
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
}

SampledSystem parse_sampled_system(const Json& j, uint64_t seed, const std::string& field) {
    std::string type = as_str(need(j, "type", field), field + ".type");
    try {
        if (type == "rotation")
            return SampledSystem::rotation(as_str(need(j, "alpha", field), field + ".alpha"), seed);
        if (type == "torus") {
            const Json& a = need(j, "alpha", field);
            if (!a.is_array()) fail(field + ".alpha", "expected an array of decimal strings");
            std::vector<std::string> alphas;
            for (const auto& x : a) alphas.push_back(as_str(x, field + ".alpha"));
            return SampledSystem::torus(alphas, seed);
        }
        if (type == "odometer")
            return SampledSystem::odometer(int(as_u64(need(j, "depth", field), field + ".depth")), seed);
        if (type == "cyclic")
            return SampledSystem::cyclic(int64_t(as_u64(need(j, "n", field), field + ".n")), seed);
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
    fail(field + ".type", "unknown sampled system \"" + type + "\"");
}

FiniteSet parse_finite_set(const Json& j, size_t n_points, const std::string& field) {
    const Json* pts = &j;
    if (j.is_object()) {
        if (!j.contains("points")) fail(field, "finite sets are {\"points\": [...]}");
        pts = &j.at("points");
    }
    if (!pts->is_array()) fail(field, "expected an array of point indices");
    FiniteSet s(n_points);
    for (const auto& p : *pts) {
        if (!p.is_number_integer() || p.get<int64_t>() < 0) fail(field, "indices must be >= 0");
        size_t x = p.get<size_t>();
        if (x >= n_points)
            fail(field, "point " + std::to_string(x) + " out of range (n_points = " +
                            std::to_string(n_points) + ")");
        s.add(x);
    }
    return s;
}

SampledSet parse_sampled_set(const Json& j, const SampledSystem& ss, const std::string& field) {
    auto interval_of = [&](const Json& pair, const std::string& f) {
        if (!pair.is_array() || pair.size() != 2) fail(f, "intervals are [lo, hi] pairs");
        return Interval{parse_rational_field(pair[0], f + "[0]"),
                        parse_rational_field(pair[1], f + "[1]")};
    };
    switch (ss.kind()) {
        case SampledKind::rotation: {
            const Json& iv = need(j, "intervals", field);
            if (!iv.is_array()) fail(field + ".intervals", "expected an array of [lo,hi] pairs");
            IntervalSet set;
            for (size_t i = 0; i < iv.size(); ++i)
                set.parts.push_back(interval_of(iv[i], field + ".intervals[" + std::to_string(i) + "]"));
            return set;
        }
        case SampledKind::torus: {
            const Json& bx = need(j, "boxes", field);
            if (!bx.is_array()) fail(field + ".boxes", "expected an array of boxes");
            BoxSet set;
            for (size_t b = 0; b < bx.size(); ++b) {
                std::string bf = field + ".boxes[" + std::to_string(b) + "]";
                if (!bx[b].is_array() || bx[b].size() != size_t(ss.dimension()))
                    fail(bf, "each box lists one [lo,hi] pair per dimension");
                std::vector<Interval> box;
                for (size_t i = 0; i < bx[b].size(); ++i)
                    box.push_back(interval_of(bx[b][i], bf + "[" + std::to_string(i) + "]"));
                set.boxes.push_back(std::move(box));
            }
            return set;
        }
        case SampledKind::odometer: {
            const Json& cy = need(j, "cylinders", field);
            if (!cy.is_array()) fail(field + ".cylinders", "expected an array of 0/1 prefixes");
            CylinderSet set;
            for (const auto& prefix : cy) {
                if (!prefix.is_array()) fail(field + ".cylinders", "each cylinder is a digit array");
                std::vector<uint8_t> digits;
                for (const auto& d : prefix) {
                    if (!d.is_number_integer() || (d.get<int64_t>() != 0 && d.get<int64_t>() != 1))
                        fail(field + ".cylinders", "digits must be 0 or 1");
                    digits.push_back(uint8_t(d.get<int64_t>()));
                }
                set.prefixes.push_back(std::move(digits));
            }
            return set;
        }
        case SampledKind::cyclic: {
            const Json& pts = need(j, "points", field);
            if (!pts.is_array()) fail(field + ".points", "expected an array of residues");
            CyclicSet set;
            for (const auto& p : pts) {
                if (!p.is_number_integer()) fail(field + ".points", "residues must be integers");
                set.residues.push_back(p.get<int64_t>());
            }
            return set;
        }
    }
    fail(field, "unreachable sampled-set kind");
}

EquivRelation parse_relation(const Json& j, const std::string& field) {
    EquivRelation rel;
    rel.masses = parse_rationals(need(j, "masses", field), 0, field + ".masses");
    const Json& classes = need(j, "classes", field);
    if (!classes.is_array() || classes.size() != rel.masses.size())
        fail(field + ".classes", "expected one class label per point");
    for (const auto& c : classes) {
        if (!c.is_number_integer() || c.get<int64_t>() < 0)
            fail(field + ".classes", "labels must be non-negative integers");
        rel.class_of.push_back(c.get<uint32_t>());
    }
    return rel;
}

TauMap parse_tau(const Json& j, size_t n_points, const std::string& field) {
    if (!j.is_array() || j.size() != n_points)
        fail(field, "expected one target index per point");
    TauMap tau;
    for (const auto& t : j) {
        if (!t.is_number_integer() || t.get<int64_t>() < 0 || t.get<size_t>() >= n_points)
            fail(field, "entries must be point indices");
        tau.table.push_back(t.get<uint32_t>());
    }
    return tau;
}

ExperimentConfig parse_config(const Json& doc) {
    if (!doc.is_object()) throw config_error("top level: expected a JSON object");
    ExperimentConfig cfg;
    cfg.raw = doc;
    cfg.command = as_str(need(doc, "command", "config"), "command");

    if (doc.contains("seed")) cfg.seed = as_u64(doc.at("seed"), "seed");
    if (doc.contains("samples")) cfg.samples = as_u64(doc.at("samples"), "samples");
    if (doc.contains("budget")) cfg.budget = as_u64(doc.at("budget"), "budget");
    if (doc.contains("abstain_threshold")) {
        if (!doc.at("abstain_threshold").is_number()) throw config_error("abstain_threshold: expected a number");
        cfg.abstain_threshold = doc.at("abstain_threshold").get<double>();
    }
    if (doc.contains("report_name")) cfg.report_name = as_str(doc.at("report_name"), "report_name");

    if (doc.contains("system")) {
        const Json& sys = doc.at("system");
        std::string type = as_str(need(sys, "type", "system"), "system.type");
        if (type == "finite") {
            cfg.finite = parse_finite_system(sys, "system");
        } else {
            uint64_t seed = cfg.seed;
            if (sys.contains("seed")) seed = as_u64(sys.at("seed"), "system.seed");
            cfg.sampled = parse_sampled_system(sys, seed, "system");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path + ": cannot open config file");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }
    return parse_config(doc);
}

} // namespace kaclab
