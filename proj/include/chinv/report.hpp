#pragma once

// JSON serialization, job configuration and the command drivers behind the
// chinv tool. Index sets are 1-based in every report and configuration.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chinv/charframe.hpp"
#include "chinv/commutant.hpp"
#include "chinv/errors.hpp"
#include "chinv/gf2.hpp"
#include "chinv/hyperlattice.hpp"
#include "chinv/modspace.hpp"

namespace chinv::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "chinv.report/1";

enum ExitCode : int { kOk = 0, kUsage = 1, kHypothesis = 2, kResource = 3, kCheckFailed = 4 };

/// Thrown for malformed configurations; maps to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

inline json to_json(const RTuple& r) { return json(r.values()); }

inline json to_json(const Mat2& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c) ? 1 : 0);
        rows.push_back(row);
    }
    return rows;
}

inline json one_based(const std::vector<std::size_t>& idx) {
    json a = json::array();
    for (auto j : idx) a.push_back(j + 1);
    return a;
}

inline json to_json(const SpaceSpec& s, const Subspace& x) {
    json basis = json::array();
    for (const auto& b : x.basis()) basis.push_back(format_vector(s, b));
    return json{{"dim", x.dim()}, {"basis", basis}};
}

inline json to_json(const IntervalSpec& iv) {
    return json{{"J", one_based(iv.J)}, {"mu", to_json(iv.mu)}, {"r", to_json(iv.r)}};
}

inline json to_json(const Classification& c) {
    return json{{"invariant", c.invariant}, {"characteristic", c.characteristic}, {"hyperinvariant", c.hyperinvariant}};
}

inline json to_json(const SpaceSpec& s, const Frame& fr) {
    return json{{"r", to_json(fr.r)},
                {"mu", to_json(fr.mu)},
                {"J", one_based(fr.J)},
                {"kernel", to_json(s, fr.kernel)},
                {"hull", to_json(s, fr.hull)}};
}

struct JobConfig {
    std::string command;
    std::vector<int> segre;
    std::vector<std::string> gens;
    std::string closure = "span";
    std::vector<std::size_t> J;  ///< 1-based
    std::vector<int> mu;
    std::string lattice = "hinv";
    Caps caps;
    std::size_t max_invariant = 200000;
    std::string format = "json";
    std::string output;
    bool verbose = false;

    void validate() const {
        static const std::set<std::string> commands{"analyze", "lattice", "interval", "construct", "oracle", "hasse"};
        if (!commands.count(command)) throw UsageError("unknown command '" + command + "'");
        if (segre.empty()) throw UsageError("a Segre characteristic is required");
        static const std::set<std::string> closures{"span", "cyclic", "char", "hyp"};
        if (!closures.count(closure)) throw UsageError("closure must be one of span, cyclic, char, hyp");
        static const std::set<std::string> formats{"json", "dot", "text"};
        if (!formats.count(format)) throw UsageError("format must be json, dot or text");
        static const std::set<std::string> lattices{"hinv", "chinv", "inv"};
        if (!lattices.count(lattice)) throw UsageError("lattice must be hinv, chinv or inv");
        if (format == "dot" && command != "lattice" && command != "hasse")
            throw UsageError("dot output is only available for lattice and hasse");
        if (caps.endo_dim == 0 || caps.subspace_dim == 0 || caps.threads == 0 || caps.search_dim == 0 ||
            max_invariant == 0)
            throw UsageError("caps must be positive");
        for (auto j : J)
            if (j == 0) throw UsageError("indices in J are 1-based");
    }
};

/// Reads a job from JSON. Unknown keys are rejected.
inline JobConfig job_from_json(const json& j, JobConfig cfg = {}) {
    if (!j.is_object()) throw UsageError("job configuration must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const json& v = it.value();
            if (k == "command") cfg.command = v.get<std::string>();
            else if (k == "segre") cfg.segre = v.get<std::vector<int>>();
            else if (k == "gens") cfg.gens = v.get<std::vector<std::string>>();
            else if (k == "closure") cfg.closure = v.get<std::string>();
            else if (k == "J") cfg.J = v.get<std::vector<std::size_t>>();
            else if (k == "mu") cfg.mu = v.get<std::vector<int>>();
            else if (k == "lattice") cfg.lattice = v.get<std::string>();
            else if (k == "format") cfg.format = v.get<std::string>();
            else if (k == "output") cfg.output = v.get<std::string>();
            else if (k == "verbose") cfg.verbose = v.get<bool>();
            else if (k == "caps") {
                for (auto c = v.begin(); c != v.end(); ++c) {
                    std::size_t n = c.value().get<std::size_t>();
                    if (c.key() == "endo_dim") cfg.caps.endo_dim = n;
                    else if (c.key() == "subspace_dim") cfg.caps.subspace_dim = n;
                    else if (c.key() == "unit_samples") cfg.caps.unit_samples = n;
                    else if (c.key() == "search_dim") cfg.caps.search_dim = n;
                    else if (c.key() == "threads") cfg.caps.threads = n;
                    else if (c.key() == "max_invariant") cfg.max_invariant = n;
                    else throw UsageError("unknown cap '" + c.key() + "'");
                }
            } else
                throw UsageError("unknown configuration key '" + k + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad configuration value: ") + e.what());
    }
    return cfg;
}

inline std::vector<std::size_t> zero_based(const std::vector<std::size_t>& J) {
    std::vector<std::size_t> out;
    for (auto j : J) out.push_back(j - 1);
    return out;
}

/// The subspace described by cfg.gens under cfg.closure.
inline Subspace subspace_from_config(const Commutant& c, const JobConfig& cfg) {
    const SpaceSpec& s = c.space();
    std::vector<Vec2> gens;
    for (const auto& g : cfg.gens) gens.push_back(parse_vector(s, g));
    if (cfg.closure == "cyclic") return invariant_span(s, gens);
    if (cfg.closure == "char") return c.characteristic_hull(gens);
    if (cfg.closure == "hyp") return c.hyperinvariant_hull(gens);
    return Subspace::span(s.n(), gens);
}

inline json header(const JobConfig& cfg, const SpaceSpec& s) {
    json h{{"schema", kSchema}, {"command", cfg.command}, {"segre", s.t()}, {"n", s.n()}, {"m", s.m()}};
    if (s.was_resorted()) h["warnings"] = json::array({"Segre characteristic was sorted into nondecreasing order"});
    return h;
}

inline json cmd_analyze(const JobConfig& cfg) {
    SpaceSpec s = SpaceSpec::build(cfg.segre);
    Commutant c(s, cfg.caps);
    Subspace x = subspace_from_config(c, cfg);
    Classification cl = c.classify(x);
    json out = header(cfg, s);
    json sub = to_json(s, x);
    sub["closure"] = cfg.closure;
    out["subspace"] = sub;
    out["flags"] = to_json(cl);
    if (cl.characteristic) {
        Frame fr = frame_trusted(s, x);
        out["frame"] = to_json(s, fr);
        json nc{{"applicable", !cl.hyperinvariant}, {"violations", json::array()}};
        if (!cl.hyperinvariant)
            for (const auto& v : necessary_conditions(s, fr)) nc["violations"].push_back(v.message());
        out["necessary_conditions"] = nc;
    } else {
        out["frame"] = nullptr;
    }
    return out;
}

/// A poset of subspaces with its covering pairs (upper, lower).
struct SubspacePoset {
    std::vector<Subspace> nodes;
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> covers;
};

inline std::vector<std::pair<std::size_t, std::size_t>> subspace_covers(const std::vector<Subspace>& xs) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = 0; b < xs.size(); ++b) {
            if (xs[a].dim() <= xs[b].dim() || !xs[a].contains(xs[b])) continue;
            bool cover = true;
            for (std::size_t c = 0; c < xs.size() && cover; ++c)
                if (xs[c].dim() > xs[b].dim() && xs[c].dim() < xs[a].dim() && xs[a].contains(xs[c]) &&
                    xs[c].contains(xs[b]))
                    cover = false;
            if (cover) out.emplace_back(a, b);
        }
    return out;
}

inline SubspacePoset build_poset(const JobConfig& cfg, const SpaceSpec& s) {
    SubspacePoset p;
    if (cfg.lattice == "hinv") {
        auto lattice = enumerate_lattice(s);
        for (const auto& r : lattice) {
            p.nodes.push_back(w_subspace(s, r));
            p.labels.push_back("W" + r.to_string());
        }
        for (auto [a, b] : covering_pairs(lattice)) p.covers.emplace_back(a, b);
        return p;
    }
    Commutant c(s, cfg.caps);
    for (auto& x : enumerate_invariant_subspaces(s, cfg.max_invariant)) {
        if (cfg.lattice == "chinv" && !c.is_characteristic(x)) continue;
        p.nodes.push_back(x);
    }
    std::stable_sort(p.nodes.begin(), p.nodes.end(),
                     [](const Subspace& a, const Subspace& b) { return a.dim() > b.dim(); });
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        std::string label = "dim " + std::to_string(p.nodes[k].dim());
        if (c.is_hyperinvariant(p.nodes[k])) label = "W" + frame_trusted(s, p.nodes[k]).r.to_string();
        p.labels.push_back(label);
    }
    p.covers = subspace_covers(p.nodes);
    return p;
}

inline std::string to_dot(const SpaceSpec& s, const SubspacePoset& p) {
    std::ostringstream o;
    o << "digraph hasse {\n  rankdir=TB;\n  node [shape=box];\n";
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        o << "  n" << k << " [label=\"" << p.labels[k] << "\\ndim " << p.nodes[k].dim() << "\"";
        if (p.nodes[k].dim() == s.n()) o << ", peripheries=2";
        o << "];\n";
    }
    for (auto [a, b] : p.covers) o << "  n" << a << " -> n" << b << ";\n";
    o << "}\n";
    return o.str();
}

inline json cmd_lattice(const JobConfig& cfg) {
    SpaceSpec s = SpaceSpec::build(cfg.segre);
    json out = header(cfg, s);
    out["lattice"] = cfg.lattice;
    if (cfg.lattice == "hinv") {
        auto lattice = enumerate_lattice(s);
        json tuples = json::array();
        for (const auto& r : lattice)
            tuples.push_back(json{{"r", to_json(r)}, {"dim", w_subspace(s, r).dim()}, {"dual", to_json(duality(s, r))}});
        out["count"] = lattice.size();
        out["tuples"] = tuples;
        json covers = json::array();
        for (auto [a, b] : covering_pairs(lattice)) covers.push_back(json::array({a, b}));
        out["covers"] = covers;
        return out;
    }
    SubspacePoset p = build_poset(cfg, s);
    json nodes = json::array();
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
        json nd = to_json(s, p.nodes[k]);
        nd["label"] = p.labels[k];
        nodes.push_back(nd);
    }
    out["count"] = p.nodes.size();
    out["nodes"] = nodes;
    json covers = json::array();
    for (auto [a, b] : p.covers) covers.push_back(json::array({a, b}));
    out["covers"] = covers;
    return out;
}

inline json cmd_interval(const JobConfig& cfg) {
    SpaceSpec s = SpaceSpec::build(cfg.segre);
    Commutant c(s, cfg.caps);
    IntervalSpec iv = build_interval(s, zero_based(cfg.J), cfg.mu);
    json out = header(cfg, s);
    out["interval"] = to_json(iv);
    out["D"] = to_json(s, iv.D);
    std::size_t total = 0, hyp = 0, kb = 0, ht = 0, both = 0, agree = 0;
    json elements = json::array();
    auto stream = interval_elements(iv, cfg.caps.subspace_dim);
    while (auto e = stream.next()) {
        Mat2 M = echelon_matrix(iv, e->Z);
        EchelonClass ec = classify_echelon(iv, M);
        Classification oc = c.classify(e->X);
        Frame fr = frame_trusted(s, e->X);
        bool ok = oc.characteristic && oc.hyperinvariant == ec.hyperinvariant &&
                  (fr.kernel == iv.bottom) == ec.kernel_is_bottom && (fr.hull == iv.top) == ec.hull_is_top;
        ++total;
        hyp += ec.hyperinvariant;
        kb += ec.kernel_is_bottom;
        ht += ec.hull_is_top;
        both += ec.kernel_is_bottom && ec.hull_is_top;
        agree += ok;
        if (cfg.verbose) {
            json el = to_json(s, e->X);
            el["echelon"] = to_json(M);
            el["hyperinvariant"] = ec.hyperinvariant;
            el["kernel_is_bottom"] = ec.kernel_is_bottom;
            el["hull_is_top"] = ec.hull_is_top;
            el["oracle"] = to_json(oc);
            elements.push_back(el);
        }
    }
    json qb = json::array();
    for (std::size_t j = 0; j <= iv.J.size(); ++j)
        qb.push_back(q_binomial(static_cast<unsigned>(iv.J.size()), static_cast<unsigned>(j), 2).str());
    out["counts"] = json{{"total", total},
                         {"hyperinvariant", hyp},
                         {"non_hyperinvariant", total - hyp},
                         {"kernel_is_bottom", kb},
                         {"hull_is_top", ht},
                         {"kernel_is_bottom_and_hull_is_top", both}};
    out["q_binomials"] = qb;
    out["galois_number"] = galois_number(static_cast<unsigned>(iv.J.size())).str();
    out["oracle_agrees"] = agree == total;
    if (cfg.verbose) out["elements"] = elements;
    return out;
}

inline json cmd_construct(const JobConfig& cfg) {
    SpaceSpec s = SpaceSpec::build(cfg.segre);
    Commutant c(s, cfg.caps);
    PartialTuple p;
    json out = header(cfg, s);
    if (cfg.J.empty()) {
        auto w = shoda(s);
        if (!w) throw HypothesisError({"no characteristic non-hyperinvariant subspace exists (Shoda criterion fails)"});
        p = PartialTuple{{w->iR, w->iS}, {0, 1}};
        out["shoda"] = json{{"R", w->R}, {"S", w->S}, {"iR", w->iR + 1}, {"iS", w->iS + 1}};
    } else {
        p = PartialTuple{zero_based(cfg.J), cfg.mu};
    }
    Construction k = construct_char_nonhyp(s, p);
    Classification cl = c.classify(k.X);
    Subspace hull = c.characteristic_hull({k.z});
    Frame fr = frame_trusted(s, k.X);
    out["partial"] = json{{"J", one_based(p.J)}, {"values", p.values}};
    out["mu"] = to_json(k.mu);
    out["r"] = to_json(k.r);
    out["z"] = format_vector(s, k.z);
    out["subspace"] = to_json(s, k.X);
    out["flags"] = to_json(cl);
    out["frame"] = to_json(s, fr);
    out["equals_hull_of_z"] = hull == k.X;
    out["frame_matches"] = fr.J == p.J && fr.mu == k.mu && fr.r == k.r;
    return out;
}

/// Rank of the linear system f A = A f in the n^2 entries of A; returns n^2 minus it.
inline std::size_t commutant_dim_by_linear_system(const SpaceSpec& s) {
    const std::size_t n = s.n();
    if (n * n > kMaxDim) throw ResourceError("linear-system check limited to n <= 16");
    auto var = [n](std::size_t r, std::size_t c) { return r * n + c; };
    auto f_src = [&](std::size_t row) -> std::optional<std::size_t> {
        auto [j, i] = s.locate(row);
        if (i == 0) return std::nullopt;
        return row - 1;
    };
    auto f_dst = [&](std::size_t col) -> std::optional<std::size_t> {
        auto [j, i] = s.locate(col);
        if (i + 1 >= s.t(j)) return std::nullopt;
        return col + 1;
    };
    IncrementalBasis eqs(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            Vec2 e(n * n);
            if (auto k = f_src(r)) e.flip(var(*k, c));
            if (auto k = f_dst(c)) e.flip(var(r, *k));
            eqs.insert(e);
        }
    return n * n - eqs.dim();
}

struct Check {
    explicit Check(std::string n) : name(std::move(n)) {}

    std::string name;
    bool pass = true;
    std::string detail;
    std::optional<std::string> counterexample;
};

inline json to_json(const Check& c) {
    json j{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
    j["counterexample"] = c.counterexample ? json(*c.counterexample) : json(nullptr);
    return j;
}

inline std::string describe(const SpaceSpec& s, const Subspace& x) {
    std::string out = "<";
    for (std::size_t k = 0; k < x.basis().size(); ++k) out += (k ? ", " : "") + format_vector(s, x.basis()[k]);
    return out + ">";
}

/// Cross-checks the structured results against the oracles for one space.
inline std::vector<Check> oracle_checks(const SpaceSpec& s, const Caps& caps, std::size_t max_invariant) {
    std::vector<Check> checks;
    Commutant c(s, caps);

    Check dim{"commutant_dimension"};
    std::size_t expected = 0;
    for (std::size_t i = 0; i < s.m(); ++i)
        for (std::size_t j = 0; j < s.m(); ++j) expected += std::min(s.t(i), s.t(j));
    dim.detail = "d = " + std::to_string(c.dim());
    if (s.n() <= 16) {
        std::size_t lin = commutant_dim_by_linear_system(s);
        dim.detail += ", linear system gives " + std::to_string(lin);
        dim.pass = lin == c.dim();
    }
    dim.pass = dim.pass && expected == c.dim();
    checks.push_back(dim);

    auto inv = enumerate_invariant_subspaces(s, max_invariant);
    std::vector<Subspace> hyp, chr;
    for (const auto& x : inv) {
        if (c.is_hyperinvariant(x)) hyp.push_back(x);
        if (c.is_characteristic(x)) chr.push_back(x);
    }

    Check lat{"hyperinvariant_lattice"};
    auto lattice = enumerate_lattice(s);
    std::set<Subspace> from_tuples, from_scan(hyp.begin(), hyp.end());
    for (const auto& r : lattice) from_tuples.insert(w_subspace(s, r));
    lat.pass = from_tuples == from_scan && from_tuples.size() == lattice.size();
    lat.detail = std::to_string(lattice.size()) + " tuples, " + std::to_string(hyp.size()) +
                 " hyperinvariant among " + std::to_string(inv.size()) + " invariant subspaces";
    for (const auto& x : from_scan)
        if (!from_tuples.count(x) && !lat.counterexample) lat.counterexample = describe(s, x);
    for (const auto& x : from_tuples)
        if (!from_scan.count(x) && !lat.counterexample) lat.counterexample = describe(s, x);
    checks.push_back(lat);

    std::vector<Subspace> nonhyp;
    for (const auto& x : chr)
        if (!c.is_hyperinvariant(x)) nonhyp.push_back(x);
    Check sh{"shoda_criterion"};
    auto w = shoda(s);
    sh.pass = w.has_value() == !nonhyp.empty();
    sh.detail = std::to_string(nonhyp.size()) + " characteristic non-hyperinvariant subspaces; criterion " +
                (w ? "holds (R=" + std::to_string(w->R) + ", S=" + std::to_string(w->S) + ")" : "fails");
    if (!w && nonhyp.empty()) sh.detail += "; no characteristic non-hyperinvariant subspace exists";
    if (!sh.pass && !nonhyp.empty()) sh.counterexample = describe(s, nonhyp.front());
    checks.push_back(sh);

    Check fl{"frame_laws"};
    std::size_t bad = 0;
    for (const auto& x : chr) {
        Frame fr = frame_trusted(s, x);
        bool ok = fr.kernel == w_subspace(s, fr.r) && fr.hull == w_subspace(s, fr.mu) && fr.hull.contains(x) &&
             x.contains(fr.kernel);
        for (std::size_t j = 0; j < s.m(); ++j) {
            bool inJ = std::find(fr.J.begin(), fr.J.end(), j) != fr.J.end();
            if (fr.mu[j] != fr.r[j] - (inJ ? 1 : 0)) ok = false;
        }
        bool h = c.is_hyperinvariant(x);
        if (h != fr.J.empty()) ok = false;
        if (!h && !necessary_conditions(s, fr).empty()) ok = false;
        if (!ok) {
            ++bad;
            if (!fl.counterexample) fl.counterexample = describe(s, x);
        }
    }
    fl.pass = bad == 0;
    fl.detail = std::to_string(chr.size()) + " characteristic subspaces, " + std::to_string(bad) + " violations";
    checks.push_back(fl);

    Check it{"interval_elements"};
    std::set<std::pair<std::vector<std::size_t>, std::vector<int>>> frames;
    for (const auto& x : nonhyp) {
        Frame fr = frame_trusted(s, x);
        frames.insert({fr.J, fr.mu.values()});
    }
    std::size_t members = 0, failures = 0;
    for (const auto& [J, mu] : frames) {
        IntervalSpec iv = build_interval(s, J, mu);
        std::size_t total = 0, hcount = 0;
        auto stream = interval_elements(iv, caps.subspace_dim);
        while (auto e = stream.next()) {
            ++total;
            if (!c.is_characteristic(e->X)) {
                ++failures;
                if (!it.counterexample) it.counterexample = describe(s, e->X);
            }
            hcount += c.is_hyperinvariant(e->X);
        }
        if (galois_number(static_cast<unsigned>(J.size())) != total || hcount != (std::size_t{1} << J.size()))
            ++failures;
        members += total;
    }
    it.pass = failures == 0;
    it.detail = std::to_string(frames.size()) + " intervals, " + std::to_string(members) + " elements checked";
    checks.push_back(it);

    Check du{"duality"};
    std::size_t dbad = 0;
    for (const auto& a : lattice) {
        if (duality(s, duality(s, a)) != a) ++dbad;
        Subspace wa = w_subspace(s, a), la = w_subspace(s, duality(s, a));
        for (const auto& b : lattice) {
            Subspace wb = w_subspace(s, b), lb = w_subspace(s, duality(s, b));
            RTuple sum = frame_trusted(s, subspace_sum(wa, wb)).r;
            RTuple meet = frame_trusted(s, subspace_intersect(wa, wb)).r;
            if (w_subspace(s, duality(s, sum)) != subspace_intersect(la, lb)) ++dbad;
            if (w_subspace(s, duality(s, meet)) != subspace_sum(la, lb)) ++dbad;
        }
    }
    du.pass = dbad == 0;
    du.detail = std::to_string(lattice.size() * lattice.size()) + " pairs, " + std::to_string(dbad) + " violations";
    checks.push_back(du);
    return checks;
}

inline json cmd_oracle(const JobConfig& cfg, bool& all_pass) {
    SpaceSpec s = SpaceSpec::build(cfg.segre);
    json out = header(cfg, s);
    json arr = json::array();
    all_pass = true;
    for (const auto& c : oracle_checks(s, cfg.caps, cfg.max_invariant)) {
        arr.push_back(to_json(c));
        all_pass = all_pass && c.pass;
    }
    out["checks"] = arr;
    out["all_pass"] = all_pass;
    return out;
}

/// Flattens a report into "path: value" lines.
inline void flatten(const json& j, const std::string& path, std::ostringstream& o) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), o);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], path + "[" + std::to_string(k) + "]", o);
    } else {
        o << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

inline std::string to_text(const json& j) {
    std::ostringstream o;
    flatten(j, "", o);
    return o.str();
}

struct Result {
    int code = kOk;
    std::string out;  ///< report for stdout
    std::string err;  ///< message for stderr
};

inline json error_report(const std::string& kind, const std::string& message,
                         const std::vector<std::string>& violations = {}) {
    json e{{"kind", kind}, {"message", message}};
    if (!violations.empty()) e["violations"] = violations;
    return json{{"schema", kSchema}, {"error", e}};
}

/// Runs one job; never throws for library errors.
inline Result run(const JobConfig& cfg) {
    auto render = [&](const json& j) { return cfg.format == "text" ? to_text(j) : j.dump(2) + "\n"; };
    try {
        cfg.validate();
        if (cfg.command == "hasse" || (cfg.command == "lattice" && cfg.format == "dot")) {
            SpaceSpec s = SpaceSpec::build(cfg.segre);
            if (cfg.command == "hasse" && cfg.format != "dot") return {kOk, render(cmd_lattice(cfg)), ""};
            return {kOk, to_dot(s, build_poset(cfg, s)), ""};
        }
        if (cfg.command == "analyze") return {kOk, render(cmd_analyze(cfg)), ""};
        if (cfg.command == "lattice") return {kOk, render(cmd_lattice(cfg)), ""};
        if (cfg.command == "interval") return {kOk, render(cmd_interval(cfg)), ""};
        if (cfg.command == "construct") return {kOk, render(cmd_construct(cfg)), ""};
        bool pass = true;
        json r = cmd_oracle(cfg, pass);
        return {pass ? kOk : kCheckFailed, render(r), pass ? "" : "oracle checks failed"};
    } catch (const UsageError& e) {
        return {kUsage, render(error_report("usage", e.what())), e.what()};
    } catch (const ParseError& e) {
        return {kUsage, render(error_report("parse", e.what())), e.what()};
    } catch (const DimensionError& e) {
        return {kUsage, render(error_report("dimension", e.what())), e.what()};
    } catch (const HypothesisError& e) {
        return {kHypothesis, render(error_report("hypothesis", e.what(), e.violations())), e.what()};
    } catch (const ResourceError& e) {
        return {kResource, render(error_report("resource", e.what())), e.what()};
    }
}

}  // namespace chinv::report
