#pragma once

// JSON instance files: {"format_version": 1, "kind": ..., "payload": {...}}.
// Rationals are "p/q" strings and distances may be "inf". Every structural
// problem surfaces as Error(Schema) or Error(InvalidRational); carrier
// mismatches between files keep their own error kinds.

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "kanlift/density.hpp"
#include "kanlift/engine.hpp"
#include "kanlift/giry.hpp"
#include "kanlift/measurable.hpp"

namespace kanlift::io {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

inline const std::vector<std::string>& instance_kinds() {
  static const std::vector<std::string> kinds{"preorder",     "topology", "lmp",           "metric_space", "pred",
                                              "stream_param", "relation", "product_param", "lifting_param"};
  return kinds;
}

struct InstanceFile {
  int format_version = kFormatVersion;
  std::string kind;
  Json payload;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Schema, where + ": " + what);
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string");
  return j.get<std::string>();
}

inline const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array");
  return j;
}

inline std::vector<Atom> atoms(const Json& j, const std::string& where) {
  std::vector<Atom> out;
  for (const auto& a : as_array(j, where)) out.push_back(as_string(a, where));
  return out;
}

inline FinSet carrier(const Json& j, const std::string& where) {
  try {
    return FinSet(atoms(j, where));
  } catch (const Error& e) {
    schema_error(where, e.what());
  }
}

inline std::size_t atom_index(const FinSet& c, const Json& j, const std::string& where) {
  const std::string a = as_string(j, where);
  const auto i = c.find(a);
  if (!i) schema_error(where, "unknown atom \"" + a + "\"");
  return *i;
}

inline Bits subset(const FinSet& c, const Json& j, const std::string& where) {
  Bits out = c.none();
  for (const auto& a : as_array(j, where)) out.set(atom_index(c, a, where));
  return out;
}

inline Rational rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  return parse_rational(as_string(j, where));
}

inline Json atoms_json(const FinSet& c, const Bits& bits) {
  Json out = Json::array();
  for_each_bit(bits, [&](std::size_t i) { out.push_back(c[i]); });
  return out;
}

}  // namespace detail

inline InstanceFile parse_instance(const Json& j) {
  InstanceFile f;
  const auto& version = detail::field(j, "format_version", "instance");
  if (!version.is_number_integer() || version.get<int>() != kFormatVersion)
    detail::schema_error("instance", "unsupported format_version");
  f.kind = detail::as_string(detail::field(j, "kind", "instance"), "instance.kind");
  if (std::find(instance_kinds().begin(), instance_kinds().end(), f.kind) == instance_kinds().end())
    detail::schema_error("instance", "unknown kind \"" + f.kind + "\"");
  f.payload = detail::field(j, "payload", "instance");
  if (!f.payload.is_object()) detail::schema_error("instance.payload", "expected an object");
  return f;
}

inline Json parse_json_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    detail::schema_error(where, std::string("malformed JSON: ") + e.what());
  }
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::schema_error(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(parse_json_text(buf.str(), path));
}

inline InstanceFile expect_kind(InstanceFile f, const std::string& kind) {
  require(f.kind == kind, ErrorKind::TagMismatch, "expected a \"" + kind + "\" instance, got \"" + f.kind + "\"");
  return f;
}

inline Json wrap(const std::string& kind, Json payload) {
  return Json{{"format_version", kFormatVersion}, {"kind", kind}, {"payload", std::move(payload)}};
}

// ---------------------------------------------------------------- fibres --

/// {"carrier": [...], "leq": [[a, b], ...]}; the reflexive-transitive closure is taken.
inline Preorder preorder_from_json(const Json& p) {
  const FinSet c = detail::carrier(detail::field(p, "carrier", "preorder"), "preorder.carrier");
  Relation r = Relation::identity(c.size());
  const auto it = p.find("leq");
  if (it != p.end()) {
    for (const auto& pair : detail::as_array(*it, "preorder.leq")) {
      if (!pair.is_array() || pair.size() != 2) detail::schema_error("preorder.leq", "expected [a, b] pairs");
      r.set(detail::atom_index(c, pair[0], "preorder.leq"), detail::atom_index(c, pair[1], "preorder.leq"));
    }
  }
  return {c, r.transitive_closure()};
}

inline Json to_json(const Preorder& p) {
  Json leq = Json::array();
  for (std::size_t i = 0; i < p.carrier.size(); ++i)
    for_each_bit(p.leq.row(i), [&](std::size_t j) {
      if (i != j) leq.push_back({p.carrier[i], p.carrier[j]});
    });
  return {{"carrier", p.carrier.atoms()}, {"leq", std::move(leq)}};
}

/// {"carrier": [...], "opens": [[...], ...]} must already be a topology;
/// {"carrier": [...], "subbasis": [[...], ...]} generates one.
inline Topology topology_from_json(const Json& p) {
  const FinSet c = detail::carrier(detail::field(p, "carrier", "topology"), "topology.carrier");
  const bool has_opens = p.contains("opens");
  const bool has_subbasis = p.contains("subbasis");
  if (has_opens == has_subbasis) detail::schema_error("topology", "give exactly one of \"opens\" or \"subbasis\"");
  std::vector<Bits> sets;
  for (const auto& u : detail::as_array(p[has_opens ? "opens" : "subbasis"], "topology"))
    sets.push_back(detail::subset(c, u, "topology"));
  if (!has_opens) return Topology::from_subbasis(c, sets);
  try {
    return Topology::from_opens(c, sets);
  } catch (const Error& e) {
    detail::schema_error("topology.opens", e.what());
  }
}

inline Json to_json(const Topology& t) {
  Json opens = Json::array();
  for (const auto& u : t.opens()) opens.push_back(detail::atoms_json(t.carrier, u));
  return {{"carrier", t.carrier.atoms()}, {"opens", std::move(opens)}};
}

/// {"carrier": [...], "members": [...]}
inline Predicate pred_from_json(const Json& p) {
  const FinSet c = detail::carrier(detail::field(p, "carrier", "pred"), "pred.carrier");
  return {c, detail::subset(c, detail::field(p, "members", "pred"), "pred.members")};
}

inline Json to_json(const Predicate& p) {
  return {{"carrier", p.carrier.atoms()}, {"members", detail::atoms_json(p.carrier, p.members)}};
}

/// {"carrier": [...], "dist": [["0", "1/2"], ...], "blocks": optional partition}
inline Pseudometric metric_from_json(const Json& p) {
  const FinSet c = detail::carrier(detail::field(p, "carrier", "metric_space"), "metric_space.carrier");
  const auto& rows = detail::as_array(detail::field(p, "dist", "metric_space"), "metric_space.dist");
  if (rows.size() != c.size()) detail::schema_error("metric_space.dist", "one row per point expected");
  Pseudometric d = Pseudometric::top(c);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& row = detail::as_array(rows[i], "metric_space.dist");
    if (row.size() != c.size()) detail::schema_error("metric_space.dist", "one entry per point expected");
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (row[j].is_number_integer()) d.dist[i][j] = ExtRational(Rational(row[j].get<long long>()));
      else d.dist[i][j] = parse_ext_rational(detail::as_string(row[j], "metric_space.dist"));
    }
  }
  try {
    d.validate();
  } catch (const Error& e) {
    detail::schema_error("metric_space", e.what());
  }
  return d;
}

inline Json to_json(const Pseudometric& d) {
  Json rows = Json::array();
  for (const auto& row : d.dist) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    rows.push_back(std::move(r));
  }
  return {{"carrier", d.carrier.atoms()}, {"dist", std::move(rows)}};
}

inline FibreObject fibre_from_instance(const InstanceFile& f) {
  if (f.kind == "preorder") return preorder_from_json(f.payload);
  if (f.kind == "topology") return topology_from_json(f.payload);
  if (f.kind == "pred") return pred_from_json(f.payload);
  if (f.kind == "metric_space") return metric_from_json(f.payload);
  throw Error(ErrorKind::TagMismatch, "a \"" + f.kind + "\" instance is not a fibre object");
}

inline std::string kind_of(const FibreObject& x) {
  switch (tag_of(x)) {
    case FibreTag::Pred: return "pred";
    case FibreTag::Pre: return "preorder";
    case FibreTag::Top: return "topology";
    case FibreTag::Met: return "metric_space";
    default: return "relation";
  }
}

inline Json to_json(const FibreObject& x) {
  return std::visit(
      [](const auto& v) -> Json {
        using F = std::remove_cvref_t<decltype(v)>;
        if constexpr (std::is_same_v<F, EndoRelation> || std::is_same_v<F, BinaryRelation>) {
          throw Error(ErrorKind::UnsupportedTag, "relations are not written as instances");
        } else {
          return to_json(v);
        }
      },
      x);
}

// ------------------------------------------------------------ measurable --

/// Optional "blocks": [[...], ...]; the discrete partition when absent.
inline FinMeasSpace space_from_json(const FinSet& c, const Json& p, const std::string& where) {
  const auto it = p.find("blocks");
  if (it == p.end()) return FinMeasSpace::discrete(c);
  std::vector<Bits> blocks;
  for (const auto& b : detail::as_array(*it, where + ".blocks")) blocks.push_back(detail::subset(c, b, where + ".blocks"));
  try {
    return FinMeasSpace(c, std::move(blocks));
  } catch (const Error& e) {
    detail::schema_error(where + ".blocks", e.what());
  }
}

/// {atom: "p/q", ...}: point masses, summed into their blocks.
inline SubProb measure_from_json(const FinMeasSpace& space, const Json& j, const std::string& where) {
  if (!j.is_object()) detail::schema_error(where, "a measure is an object of point masses");
  std::vector<Rational> mass(space.block_count(), Rational(0));
  for (const auto& [atom, value] : j.items()) {
    const auto i = space.carrier().find(atom);
    require(i.has_value(), ErrorKind::CarrierMismatch, where + ": \"" + atom + "\" is not a point of the space");
    mass[space.block_of(*i)] += detail::rational(value, where);
  }
  try {
    return SubProb(space, std::move(mass));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidStructure) throw;
    detail::schema_error(where, e.what());
  }
}

/// Masses by block: {first atom of block: mass}.
inline Json to_json(const SubProb& v) {
  Json out = Json::object();
  const auto& space = v.space();
  for (std::size_t k = 0; k < space.block_count(); ++k)
    if (v.mass()[k] != 0) out[space.carrier()[space.blocks()[k].find_first()]] = to_string(v.mass()[k]);
  return out;
}

/// {"states": [...], "blocks": optional, "actions": [...],
///  "kernel": {action: {state: {atom: mass}}}}; missing entries are zero.
inline LMP lmp_from_json(const Json& p) {
  const FinSet states = detail::carrier(detail::field(p, "states", "lmp"), "lmp.states");
  const FinMeasSpace space = space_from_json(states, p, "lmp");
  const FinSet actions = detail::carrier(detail::field(p, "actions", "lmp"), "lmp.actions");
  const auto& kernel = detail::field(p, "kernel", "lmp");
  if (!kernel.is_object()) detail::schema_error("lmp.kernel", "expected an object");
  std::vector<std::vector<SubProb>> rows(actions.size(), std::vector<SubProb>(states.size(), SubProb::zero(space)));
  for (const auto& [action, per_state] : kernel.items()) {
    const auto a = actions.find(action);
    if (!a) detail::schema_error("lmp.kernel", "unknown action \"" + action + "\"");
    if (!per_state.is_object()) detail::schema_error("lmp.kernel", "expected an object per action");
    for (const auto& [state, measure] : per_state.items()) {
      const auto s = states.find(state);
      if (!s) detail::schema_error("lmp.kernel", "unknown state \"" + state + "\"");
      rows[*a][*s] = measure_from_json(space, measure, "lmp.kernel." + action + "." + state);
    }
  }
  try {
    return LMP(space, actions, std::move(rows));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidStructure) throw;
    detail::schema_error("lmp", e.what());
  }
}

/// {"pairs": [[left, right], ...]} between the given carriers.
inline Relation relation_from_json(const Json& p, const FinSet& left, const FinSet& right) {
  Relation r(left.size(), right.size());
  for (const auto& pair : detail::as_array(detail::field(p, "pairs", "relation"), "relation.pairs")) {
    if (!pair.is_array() || pair.size() != 2) detail::schema_error("relation.pairs", "expected [a, b] pairs");
    const auto a = left.find(detail::as_string(pair[0], "relation.pairs"));
    const auto b = right.find(detail::as_string(pair[1], "relation.pairs"));
    require(a && b, ErrorKind::CarrierMismatch,
            "relation pair [" + pair[0].dump() + ", " + pair[1].dump() + "] is outside the state spaces");
    r.set(*a, *b);
  }
  return r;
}

inline Json relation_to_json(const Relation& r, const FinSet& left, const FinSet& right) {
  Json pairs = Json::array();
  for (std::size_t i = 0; i < r.rows(); ++i)
    for_each_bit(r.row(i), [&](std::size_t j) { pairs.push_back({left[i], right[j]}); });
  return {{"pairs", std::move(pairs)}};
}

inline Json to_json(const SimWitness& w, const LMP& lmp1, const LMP& lmp2) {
  return {{"pair", {lmp1.states()[w.s1], lmp2.states()[w.s2]}},
          {"action", lmp1.actions()[w.action]},
          {"V", detail::atoms_json(lmp1.states(), w.v)},
          {"W", detail::atoms_json(lmp2.states(), w.w)},
          {"mass_V", to_string(lmp1.kernel(w.action, w.s1).on_blocks(lmp1.space().block_mask(w.v)))},
          {"mass_W", to_string(lmp2.kernel(w.action, w.s2).on_blocks(lmp2.space().block_mask(w.w)))}};
}

// --------------------------------------------------------------- density --

inline Lasso lasso_from_json(const Json& j, const std::string& where) {
  const auto prefix = j.contains("prefix") ? detail::atoms(j["prefix"], where + ".prefix") : std::vector<Atom>{};
  const auto cycle = detail::atoms(detail::field(j, "cycle", where), where + ".cycle");
  if (cycle.empty()) detail::schema_error(where, "a stream needs a nonempty cycle");
  return Lasso(prefix, cycle);
}

inline Json to_json(const Lasso& l) { return {{"prefix", l.prefix()}, {"cycle", l.cycle()}}; }

/// {"r": [...], "s0": [{"prefix": [...], "cycle": [...]}, ...]}
inline StreamParam stream_param_from_json(const Json& p) {
  const FinSet r = detail::carrier(detail::field(p, "r", "stream_param"), "stream_param.r");
  std::vector<Lasso> s0;
  for (const auto& l : detail::as_array(detail::field(p, "s0", "stream_param"), "stream_param.s0"))
    s0.push_back(lasso_from_json(l, "stream_param.s0"));
  try {
    return StreamParam(r, std::move(s0));
  } catch (const Error& e) {
    detail::schema_error("stream_param", e.what());
  }
}

struct ProductParam {
  FinSet a;
  FinSet r;
  Predicate s;
};

/// {"a": [...], "r": [...], "s0": [[r, a], ...]}
inline ProductParam product_param_from_json(const Json& p) {
  ProductParam out;
  out.a = detail::carrier(detail::field(p, "a", "product_param"), "product_param.a");
  out.r = detail::carrier(detail::field(p, "r", "product_param"), "product_param.r");
  const FinSet ra = product(out.r, out.a);
  out.s = {ra, ra.none()};
  for (const auto& pair : detail::as_array(detail::field(p, "s0", "product_param"), "product_param.s0")) {
    if (!pair.is_array() || pair.size() != 2) detail::schema_error("product_param.s0", "expected [r, a] pairs");
    out.s.members.set(pair_index(detail::atom_index(out.r, pair[0], "product_param.s0"),
                                 detail::atom_index(out.a, pair[1], "product_param.s0"), out.a.size()));
  }
  return out;
}

// ------------------------------------------------------- lifting params --

/// {"fibre": "preorder" | "topology",
///  "entries": [{"r": [...], "s": <preorder or topology payload over T R>}]}
/// The atoms of T R are "{}", "{a}", "{a,b}", ... in bit order.
template <FibreType F>
LiftingParam<F> lifting_param_from_json(const FiniteMonad& m, const Json& p) {
  LiftingParam<F> out;
  for (const auto& e : detail::as_array(detail::field(p, "entries", "lifting_param"), "lifting_param.entries")) {
    const FinSet r = detail::carrier(detail::field(e, "r", "lifting_param.entries"), "lifting_param.entries.r");
    F s;
    if constexpr (std::is_same_v<F, Preorder>) s = preorder_from_json(detail::field(e, "s", "lifting_param.entries"));
    else s = topology_from_json(detail::field(e, "s", "lifting_param.entries"));
    require(apply_monad(m, r) == s.carrier, ErrorKind::CarrierMismatch,
            "lifting parameter: the carrier of S must be T R in canonical order");
    out.entries.push_back({r, std::move(s)});
  }
  if (out.entries.empty()) detail::schema_error("lifting_param.entries", "at least one entry expected");
  return out;
}

}  // namespace kanlift::io
