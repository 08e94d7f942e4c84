#ifndef CUBIX_IO_HPP
#define CUBIX_IO_HPP

// JSON serialization of cubics, classification reports, factorizations,
// censuses and trial reports.  All numbers are rendered exactly as strings
// ("n/m" over Q, "u+v*w" in quadratic extensions).

#include <json.hpp>

#include "cubix/verify.hpp"

namespace cubix {

using nlohmann::json;

inline json elem_json(const Elem& e) { return e.str(); }

inline json cubic_json(const BinaryCubic& p) {
    json raw = json::array(), abcd = json::array();
    for (const Elem& e : p.raw()) raw.push_back(elem_json(e));
    for (const Elem& e : {p.a(), p.b(), p.c(), p.d()}) abcd.push_back(elem_json(e));
    return {{"raw", raw}, {"abcd", abcd}, {"field", p.field()->descriptor()}};
}

inline BinaryCubic cubic_from_csv(const FieldPtr& f, const std::string& csv) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) throw ParseError("cubic: expected 4 comma-separated coefficients");
    return BinaryCubic::from_raw(f->parse_element(parts[0]), f->parse_element(parts[1]),
                                 f->parse_element(parts[2]), f->parse_element(parts[3]));
}

inline json invariant_json(const OrbitInvariant& inv) {
    json out;
    out["stratum"] = stratum_name(inv.kind);
    if (inv.q) out["q"] = elem_json(*inv.q);
    if (inv.c) out["cube_class"] = elem_json(inv.c->rep());
    if (inv.extension) out["extension"] = inv.extension->descriptor();
    return out;
}

inline json classify_json(const BinaryCubic& p) {
    json out;
    Stratum s = classify(p);
    out["stratum"] = stratum_name(s.kind);
    out["qn"] = elem_json(qn(p));
    if (s.q) out["q"] = elem_json(*s.q);
    if (s.extension) out["extension"] = s.extension->descriptor();
    if (s.kind != StratumKind::Zero) {
        out["invariant"] = invariant_json(invariant_of(p));
        out["reducible"] = is_reducible(p);
    }
    return out;
}

inline json factorization_json(const Factorization& fz) {
    json out;
    out["unit"] = elem_json(fz.unit);
    json factors = json::array();
    for (const FactorTerm& t : fz.factors) {
        json coeffs = json::array();
        for (const Elem& c : t.form.coeffs) coeffs.push_back(elem_json(c));
        factors.push_back({{"coeffs", coeffs},
                           {"degree", t.form.degree()},
                           {"multiplicity", t.multiplicity},
                           {"irreducible", t.irreducible}});
    }
    out["factors"] = factors;
    return out;
}

inline json census_json(const OrbitCensus& c) {
    json out;
    out["field"] = c.field->descriptor();
    json orbits = json::array();
    for (const OrbitEntry& e : c.sl_orbits) {
        orbits.push_back({{"representative", cubic_json(e.rep)},
                          {"size", e.size},
                          {"stratum", stratum_name(e.stratum)},
                          {"invariant", invariant_json(e.invariant)},
                          {"stabilizer", e.stabilizer.get_str()}});
    }
    out["sl_orbits"] = orbits;
    json fusion = json::array();
    for (const auto& g : c.gl_orbits) fusion.push_back(g);
    out["gl_fusion"] = fusion;
    out["totals"] = {{"sl_triple", c.sl_triple},
                     {"sl_double", c.sl_double},
                     {"sl_square", c.sl_square},
                     {"sl_nonsquare", c.sl_nonsquare},
                     {"sl_nonzero_disc", c.sl_nonzero_disc},
                     {"gl_triple", c.gl_triple},
                     {"gl_double", c.gl_double},
                     {"gl_square", c.gl_square},
                     {"gl_nonsquare", c.gl_nonsquare},
                     {"gl_nonzero_disc", c.gl_nonzero_disc}};
    return out;
}

inline json trial_reports_json(const std::vector<TrialReport>& reports) {
    json out = json::array();
    for (const TrialReport& r : reports) {
        out.push_back({{"name", r.name},
                       {"trials", r.trials},
                       {"seed", r.seed},
                       {"pass", r.pass()},
                       {"failures", r.failures},
                       {"elapsed_ms", r.elapsed_ms}});
    }
    return out;
}

} // namespace cubix

#endif
