#include "picoh/io.hpp"

#include <fstream>

namespace picoh {

namespace {

Rational rational_from_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw validation_error(path + ": expected a rational as \"p/q\" string or integer");
}

json rational_to_json(const Rational& q) { return q.str(); }

long require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw validation_error(path + ": expected an integer");
    return j.get<long>();
}

const json& require_field(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw validation_error(path + ": missing field \"" + key + "\"");
    return *it;
}

BoundaryMode mode_from_json(const json& j, const std::string& path, bool allow_full) {
    BoundaryMode m;
    std::string kind = require_field(j, "mode", path).get<std::string>();
    if (kind == "empty") m.kind = BoundaryKind::Empty;
    else if (kind == "full") {
        if (!allow_full) throw validation_error(path + ": mode \"full\" is only valid below the box");
        m.kind = BoundaryKind::Full;
    } else if (kind == "affine") {
        m.kind = BoundaryKind::Affine;
        m.slope = require_int(require_field(j, "slope", path), path + ".slope");
        m.intercept = require_int(require_field(j, "intercept", path), path + ".intercept");
    } else {
        throw validation_error(path + ": unknown mode \"" + kind + "\"");
    }
    return m;
}

ordered_json mode_to_json(const BoundaryMode& m) {
    ordered_json j;
    switch (m.kind) {
        case BoundaryKind::Empty: j["mode"] = "empty"; break;
        case BoundaryKind::Full: j["mode"] = "full"; break;
        case BoundaryKind::Affine:
            j["mode"] = "affine";
            j["slope"] = m.slope;
            j["intercept"] = m.intercept;
            break;
    }
    return j;
}

InnerOp inner_from_json(const json& j, const std::string& path) {
    InnerOp op;
    for (const auto& term : require_field(j, "terms", path)) {
        long e = require_int(term.at(0), path + ".terms[0]");
        PowerSeries2<Rational> c;
        for (const auto& mono : term.at(1)) {
            long e1 = require_int(mono.at(0), path + ".coeff[0]");
            long e2 = require_int(mono.at(1), path + ".coeff[1]");
            c = c + PowerSeries2<Rational>::term(e1, e2,
                                                 rational_from_json(mono.at(2), path + ".coeff[2]"));
        }
        op.c.emplace(e, std::move(c));
    }
    if (j.contains("floor") && !j["floor"].is_null())
        op.floor_ = require_int(j["floor"], path + ".floor");
    return op;
}

ordered_json inner_to_json(const InnerOp& op) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : op.c) {
        ordered_json monos = ordered_json::array();
        for (const auto& [ee, q] : c.c)
            monos.push_back({ee.first, ee.second, rational_to_json(q)});
        terms.push_back({e, monos});
    }
    ordered_json j;
    j["terms"] = terms;
    if (op.floor_) j["floor"] = *op.floor_;
    else j["floor"] = nullptr;
    return j;
}

} // namespace

ordered_json dual_to_json(const DualNumber& d) {
    ordered_json j;
    j["v"] = d.value.str();
    j["eps"] = d.eps.str();
    return j;
}

DualNumber dual_from_json(const json& j) {
    return {rational_from_json(require_field(j, "v", "dual"), "dual.v"),
            rational_from_json(require_field(j, "eps", "dual"), "dual.eps")};
}

ordered_json series_to_json(const BiSeries<Rational>& s) {
    ordered_json j;
    j["kind"] = "series";
    ordered_json terms = ordered_json::array();
    ordered_json caps = ordered_json::array();
    for (const auto& [n, lv] : s.levels) {
        for (const auto& [u, q] : lv.c) terms.push_back({n, u, rational_to_json(q)});
        if (lv.cap) caps.push_back({n, *lv.cap});
    }
    j["terms"] = terms;
    j["t_cap"] = s.t_cap ? json(*s.t_cap) : json(nullptr);
    j["u_caps"] = caps;
    return j;
}

BiSeries<Rational> series_from_json(const json& j) {
    BiSeries<Rational> s;
    for (const auto& term : require_field(j, "terms", "series")) {
        long t = require_int(term.at(0), "series.terms[0]");
        long u = require_int(term.at(1), "series.terms[1]");
        s = s + BiSeries<Rational>::monomial(t, u, rational_from_json(term.at(2), "series.terms[2]"));
    }
    if (j.contains("t_cap") && !j["t_cap"].is_null())
        s.t_cap = require_int(j["t_cap"], "series.t_cap");
    if (j.contains("u_caps"))
        for (const auto& c : j["u_caps"]) {
            long n = require_int(c.at(0), "series.u_caps[0]");
            long cap = require_int(c.at(1), "series.u_caps[1]");
            auto& lv = s.levels[n];
            lv.cap = lv.cap ? std::min(*lv.cap, cap) : cap;
        }
    s.normalize();
    return s;
}

ordered_json operator_to_json(const EOp& op) {
    ordered_json j;
    j["kind"] = "operator";
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : op.c) terms.push_back({e, inner_to_json(c)});
    j["terms"] = terms;
    j["floor"] = op.floor_ ? json(*op.floor_) : json(nullptr);
    return j;
}

EOp operator_from_json(const json& j) {
    EOp op;
    for (const auto& term : require_field(j, "terms", "operator")) {
        long e = require_int(term.at(0), "operator.terms[0]");
        op.c.emplace(e, inner_from_json(term.at(1), "operator.terms[1]"));
    }
    if (j.contains("floor") && !j["floor"].is_null())
        op.floor_ = require_int(j["floor"], "operator.floor");
    return op;
}

ordered_json pair_to_json(const ParshinPair& p) {
    ordered_json j;
    j["kind"] = "pair";
    j["L"] = operator_to_json(p.L);
    j["M"] = operator_to_json(p.M);
    return j;
}

ParshinPair pair_from_json(const json& j) {
    return {operator_from_json(require_field(j, "L", "pair")),
            operator_from_json(require_field(j, "M", "pair"))};
}

ordered_json subspace_to_json(const WindowedSubspace& w) {
    ordered_json j;
    j["kind"] = "subspace";
    j["rank"] = w.rank();
    j["box"] = {{"t_lo", w.box().t_lo},
                {"t_hi", w.box().t_hi},
                {"u_lo", w.box().u_lo},
                {"u_hi", w.box().u_hi}};
    ordered_json tails = ordered_json::array();
    for (int c = 0; c < w.rank(); ++c) {
        ordered_json tj;
        tj["component"] = c;
        ordered_json ds = ordered_json::array();
        for (const auto& [n, d] : w.tail().d[c]) ds.push_back({n, d});
        tj["d"] = ds;
        tj["high"] = mode_to_json(w.tail().high[c]);
        tj["low"] = mode_to_json(w.tail().low[c]);
        tails.push_back(std::move(tj));
    }
    j["tails"] = tails;
    ordered_json gens = ordered_json::array();
    for (const auto& g : w.raw_generators()) {
        ordered_json quads = ordered_json::array();
        for (int c = 0; c < static_cast<int>(g.size()); ++c)
            for (const auto& [n, lv] : g[c].levels)
                for (const auto& [u, q] : lv.c)
                    quads.push_back({n, u, c, rational_to_json(q)});
        gens.push_back(std::move(quads));
    }
    j["generators"] = gens;
    return j;
}

WindowedSubspace subspace_from_json(const json& j) {
    int rank = static_cast<int>(require_int(require_field(j, "rank", "subspace"), "subspace.rank"));
    const json& bj = require_field(j, "box", "subspace");
    MonomialBox box{require_int(require_field(bj, "t_lo", "subspace.box"), "subspace.box.t_lo"),
                    require_int(require_field(bj, "t_hi", "subspace.box"), "subspace.box.t_hi"),
                    require_int(require_field(bj, "u_lo", "subspace.box"), "subspace.box.u_lo"),
                    require_int(require_field(bj, "u_hi", "subspace.box"), "subspace.box.u_hi"),
                    rank};
    TailProfile tail = TailProfile::none(rank);
    if (j.contains("tails"))
        for (const auto& tj : j["tails"]) {
            int c = static_cast<int>(require_int(require_field(tj, "component", "subspace.tails"),
                                                 "subspace.tails.component"));
            if (c < 0 || c >= rank)
                throw validation_error("subspace.tails.component: out of range");
            if (tj.contains("d"))
                for (const auto& dd : tj["d"]) {
                    long n = require_int(dd.at(0), "subspace.tails.d[0]");
                    tail.d[c][n] = require_int(dd.at(1), "subspace.tails.d[1]");
                }
            if (tj.contains("high"))
                tail.high[c] = mode_from_json(tj["high"], "subspace.tails.high", false);
            if (tj.contains("low"))
                tail.low[c] = mode_from_json(tj["low"], "subspace.tails.low", true);
        }
    std::vector<FieldVec> gens;
    if (j.contains("generators"))
        for (const auto& gj : j["generators"]) {
            FieldVec g(rank);
            for (const auto& quad : gj) {
                long t = require_int(quad.at(0), "subspace.generators[][0]");
                long u = require_int(quad.at(1), "subspace.generators[][1]");
                int c = static_cast<int>(require_int(quad.at(2), "subspace.generators[][2]"));
                if (c < 0 || c >= rank)
                    throw validation_error("subspace.generators: component out of range");
                g[c] = g[c] + BiSeries<Rational>::monomial(
                                  t, u, rational_from_json(quad.at(3), "subspace.generators[][3]"));
            }
            gens.push_back(std::move(g));
        }
    return WindowedSubspace(box, std::move(tail), std::move(gens));
}

ordered_json report_to_json(const CohomologyReport& r, bool stable) {
    auto dim = [](const DimValue& d) -> ordered_json {
        if (d.certified()) return *d.global;
        return "unbounded";
    };
    ordered_json j;
    j["h0"] = dim(r.h0);
    j["h1"] = dim(r.h1);
    j["h2"] = dim(r.h2);
    j["stable"] = stable;
    j["certified"] = r.finiteness_certified;
    return j;
}

json load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error(path + ": " + std::string(e.what()));
    }
    if (!j.contains("kind") || !j["kind"].is_string())
        throw validation_error(path + ": missing document discriminator \"kind\"");
    return j;
}

} // namespace picoh
