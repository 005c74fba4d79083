#pragma once
// JSON round-trip for rings, ideals, matrices, telescopes, and chain specs,
// plus the literal parsers the batch front door accepts on the command line.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trideal/monoid.hpp"

namespace trideal {

using Json = nlohmann::json;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline long long parse_int(const std::string& tok, const char* what) {
    if (tok.empty()) throw InputError(std::string(what) + ": empty number");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw InputError(std::string(what) + ": not an integer: " + tok);
    }
    if (pos != tok.size())
        throw InputError(std::string(what) + ": not an integer: " + tok);
    return v;
}

}  // namespace detail

inline std::vector<Elem> parse_elem_list(const std::string& s) {
    std::vector<Elem> out;
    if (s.empty()) return out;
    for (const std::string& tok : detail::split(s, ','))
        out.push_back(static_cast<Elem>(detail::parse_int(tok, "element list")));
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    for (const std::string& tok : detail::split(s, ','))
        out.push_back(static_cast<int>(detail::parse_int(tok, "integer list")));
    return out;
}

// ---------------------------------------------------------------- rings

/// Owns a ring loaded for one command together with its canonical spec.
/// Handlers pass around the shared pointer so ideals and telescopes keep a
/// stable ring address.
struct RingBox {
    std::shared_ptr<Ring> ring;
    Json spec;
    std::string label;
};

inline Json ring_to_json(const Ring& R) {
    Json j;
    j["kind"] = "tables";
    j["name"] = R.name();
    j["size"] = R.size();
    j["add"] = R.add_table();
    j["mul"] = R.mul_table();
    j["zero"] = R.zero();
    j["one"] = R.one();
    return j;
}

inline RingBox ring_from_spec(const Json& spec) {
    if (!spec.is_object() || !spec.contains("kind"))
        throw InputError("ring spec needs a kind field");
    RingBox box;
    const std::string kind = spec.at("kind").get<std::string>();
    if (kind == "preset") {
        const std::string preset = spec.at("preset").get<std::string>();
        if (preset == "triangular") {
            int n = spec.at("n").get<int>();
            int q = spec.at("q").get<int>();
            box.ring = std::make_shared<Ring>(preset_triangular(n, q));
        } else if (preset == "modular") {
            int n = spec.at("n").get<int>();
            box.ring = std::make_shared<Ring>(preset_modular(n));
        } else {
            throw InputError("unknown ring preset: " + preset);
        }
        box.spec = Json{{"kind", "preset"}, {"preset", preset}};
        if (spec.contains("n")) box.spec["n"] = spec.at("n");
        if (spec.contains("q")) box.spec["q"] = spec.at("q");
    } else if (kind == "tables") {
        box.ring = std::make_shared<Ring>(make_ring_from_tables(
            spec.value("name", std::string("custom")), spec.at("size").get<int>(),
            spec.at("add").get<std::vector<Elem>>(), spec.at("mul").get<std::vector<Elem>>(),
            spec.at("zero").get<Elem>(), spec.at("one").get<Elem>()));
        box.spec = ring_to_json(*box.ring);
    } else {
        throw InputError("unknown ring spec kind: " + kind);
    }
    box.label = box.ring->name();
    return box;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

/// Presets are addressable by name (triangular-N-Q, modular-N); anything
/// else is read as a ring spec file path.
inline RingBox ring_from_name(const std::string& name) {
    auto tok = detail::split(name, '-');
    if (tok.size() == 3 && tok[0] == "triangular") {
        Json spec{{"kind", "preset"},
                  {"preset", "triangular"},
                  {"n", detail::parse_int(tok[1], "preset size")},
                  {"q", detail::parse_int(tok[2], "preset modulus")}};
        return ring_from_spec(spec);
    }
    if (tok.size() == 2 && tok[0] == "modular") {
        Json spec{{"kind", "preset"},
                  {"preset", "modular"},
                  {"n", detail::parse_int(tok[1], "preset modulus")}};
        return ring_from_spec(spec);
    }
    return ring_from_spec(load_json_file(name));
}

// ---------------------------------------------------------------- ideals

inline std::string side_to_string(Side s) {
    switch (s) {
        case Side::Left: return "left";
        case Side::Right: return "right";
        default: return "two_sided";
    }
}

inline Side side_from_string(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    if (s == "two_sided") return Side::TwoSided;
    throw InputError("unknown side: " + s + " (want left|right|two_sided)");
}

inline Json ideal_to_json(const Ideal& I) {
    return Json{{"side", side_to_string(I.side)}, {"gens", minimal_generators(I)}};
}

inline Json ideal_summary(const Ideal& I) {
    Json j = ideal_to_json(I);
    j["elems"] = I.elems;
    j["count"] = I.count();
    return j;
}

inline Ideal ideal_from_json(const Ring& R, const Json& j) {
    if (!j.is_object() || !j.contains("gens"))
        throw InputError("ideal literal needs a gens field");
    Side side = side_from_string(j.value("side", std::string("two_sided")));
    return make_ideal(R, j.at("gens").get<std::vector<Elem>>(), side);
}

// -------------------------------------------------------------- matrices

inline Json mat_to_json(const Mat& M) {
    return Json{{"rows", M.rows}, {"cols", M.cols}, {"data", M.a}};
}

inline Mat mat_from_json(const Ring& R, const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols"))
        throw InputError("matrix needs rows, cols and data fields");
    Mat M(j.at("rows").get<int>(), j.at("cols").get<int>());
    auto data = j.at("data").get<std::vector<Elem>>();
    if (data.size() != M.a.size())
        throw InputError("matrix data length does not match its shape");
    for (Elem v : data)
        if (v < 0 || v >= R.size()) throw InputError("matrix entry out of ring range");
    M.a = std::move(data);
    return M;
}

// ------------------------------------------------------------- telescopes

inline Json tail_to_json(const TailRule& tail) {
    switch (tail.kind) {
        case TailKind::None: return Json{{"rule", "none"}};
        case TailKind::EntryPeriodic:
            return Json{{"rule", "entry_periodic"}, {"start", tail.start},
                        {"period", tail.period}};
        case TailKind::BlockDiagonal:
            return Json{{"rule", "block_diagonal"}, {"start", tail.start},
                        {"factor", tail.factor}};
        default:
            throw InputError("tree-level tails do not serialize; emit a materialized prefix");
    }
}

inline TailRule tail_from_json(const Json& j) {
    TailRule tail;
    const std::string rule = j.value("rule", std::string("none"));
    if (rule == "none") {
        tail.kind = TailKind::None;
    } else if (rule == "entry_periodic") {
        tail.kind = TailKind::EntryPeriodic;
        tail.start = j.at("start").get<int>();
        tail.period = j.at("period").get<int>();
    } else if (rule == "block_diagonal") {
        tail.kind = TailKind::BlockDiagonal;
        tail.start = j.at("start").get<int>();
        tail.factor = j.at("factor").get<int>();
    } else {
        throw InputError("unknown tail rule: " + rule);
    }
    return tail;
}

inline Json telescope_to_json(const Telescope& T, const std::string& ring_label) {
    Json j;
    j["ring"] = ring_label;
    j["sizes"] = T.sizes;
    j["tail"] = tail_to_json(T.tail);
    Json xs = Json::array();
    for (const Mat& m : T.X) xs.push_back(mat_to_json(m));
    j["X"] = xs;
    Json ys = Json::array();
    for (const Mat& m : T.Y) ys.push_back(m.rows > 0 ? mat_to_json(m) : Json());
    j["Y"] = ys;
    return j;
}

inline Telescope telescope_from_json(const Ring& R, const Json& j) {
    if (!j.is_object() || !j.contains("sizes") || !j.contains("X"))
        throw InputError("telescope file needs sizes and X fields");
    std::vector<int> sizes = j.at("sizes").get<std::vector<int>>();
    std::vector<Mat> X, Y;
    for (const Json& m : j.at("X")) X.push_back(mat_from_json(R, m));
    if (j.contains("Y"))
        for (const Json& m : j.at("Y")) Y.push_back(m.is_null() ? Mat{} : mat_from_json(R, m));
    TailRule tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailRule{};
    return make_telescope(R, std::move(sizes), std::move(X), std::move(Y), tail);
}

/// Materialized prefix with the tail dropped: the serializable form of a
/// telescope whose tail rule has no file encoding.
inline Telescope flattened(const Telescope& T, int stages) {
    Telescope W = materialized(T, stages);
    W.tail = TailRule{};
    return W;
}

// ------------------------------------------------------------ chain specs

inline ChainSpec chainspec_from_json(const Ring& R, const Json& j) {
    if (!j.is_object() || !j.contains("ideals") || !j.contains("gens"))
        throw InputError("chain spec needs ideals and gens fields");
    ChainSpec cs;
    cs.ring = &R;
    for (const Json& lit : j.at("ideals")) {
        Json fixed = lit;
        if (!fixed.contains("side")) fixed["side"] = "two_sided";
        cs.ideals.push_back(ideal_from_json(R, fixed));
    }
    for (const Json& g : j.at("gens")) cs.gens.push_back(g.get<std::vector<Elem>>());
    if (j.contains("lifts"))
        for (const auto& [key, val] : j.at("lifts").items()) {
            auto parts = detail::split(key, ',');
            if (parts.size() != 2) throw InputError("lift key must look like \"i,j\"");
            int a = static_cast<int>(detail::parse_int(parts[0], "lift key"));
            int b = static_cast<int>(detail::parse_int(parts[1], "lift key"));
            cs.lifts[{a, b}] = val.get<Elem>();
        }
    cs.constant_tail = j.value("constant_tail", true);
    return cs;
}

inline Json chainspec_to_json(const ChainSpec& cs, const std::string& ring_label) {
    Json j;
    j["ring"] = ring_label;
    Json ideals = Json::array();
    for (const Ideal& I : cs.ideals) ideals.push_back(ideal_to_json(I));
    j["ideals"] = ideals;
    j["gens"] = cs.gens;
    Json lifts = Json::object();
    for (const auto& [key, val] : cs.lifts)
        lifts[std::to_string(key.first) + "," + std::to_string(key.second)] = val;
    j["lifts"] = lifts;
    j["constant_tail"] = cs.constant_tail;
    return j;
}

inline LiftChain liftchain_from_json(const Ring& R, const Json& j) {
    if (!j.is_object() || !j.contains("links") || !j.contains("gens"))
        throw InputError("lift chain needs links and gens fields");
    LiftChain ch;
    for (const Json& lit : j.at("links")) {
        Json fixed = lit;
        if (!fixed.contains("side")) fixed["side"] = "left";
        ch.links.push_back(ideal_from_json(R, fixed));
    }
    for (const Json& g : j.at("gens")) ch.gens.push_back(g.get<std::vector<Elem>>());
    ch.constant_tail = j.value("constant_tail", true);
    return ch;
}

// --------------------------------------------------------- dimension vectors

inline DimVector dim_from_string(const std::string& s) {
    DimVector out;
    if (s.empty()) return out;
    for (std::string tok : detail::split(s, ',')) {
        std::transform(tok.begin(), tok.end(), tok.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (tok == "inf") out.push_back(ExtNat::inf());
        else out.push_back(ExtNat(detail::parse_int(tok, "dimension vector")));
    }
    return out;
}

inline std::string dim_to_string(const DimVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i].infinite ? "inf" : std::to_string(v[i].value);
    }
    return out;
}

inline Json dim_to_json(const DimVector& v) {
    Json arr = Json::array();
    for (ExtNat e : v) {
        if (e.infinite) arr.push_back("inf");
        else arr.push_back(e.value);
    }
    return arr;
}

// ---------------------------------------------------------- congruence flags

/// Rows come as "2,3;1,2" and moduli as "5,2"; row-less systems need the
/// explicit coordinate count.
inline CongruenceSystem congruence_from_flags(const std::string& rows,
                                              const std::string& mods,
                                              int k_when_empty = 0) {
    std::vector<std::vector<long long>> rowv;
    if (!rows.empty())
        for (const std::string& row : detail::split(rows, ';')) {
            std::vector<long long> r;
            for (const std::string& tok : detail::split(row, ','))
                r.push_back(detail::parse_int(tok, "congruence row"));
            rowv.push_back(std::move(r));
        }
    std::vector<long long> modv;
    if (!mods.empty())
        for (const std::string& tok : detail::split(mods, ','))
            modv.push_back(detail::parse_int(tok, "modulus list"));
    int k = rowv.empty() ? k_when_empty : static_cast<int>(rowv.front().size());
    return make_congruence_system(k, std::move(rowv), std::move(modv));
}

}  // namespace trideal
