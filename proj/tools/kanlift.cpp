// kanlift: command-line front end.
//
// Exit codes: 0 success / true verdict, 1 false verdict or failed suite,
// 2 malformed input (schema, rational, unknown suite), 3 tag, carrier or
// action mismatch between inputs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kanlift/io.hpp"
#include "kanlift/kantorovich.hpp"
#include "kanlift/suites.hpp"

using namespace kanlift;
using io::Json;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::TagMismatch:
    case ErrorKind::CarrierMismatch:
    case ErrorKind::AmbientMismatch:
    case ErrorKind::SpaceMismatch:
    case ErrorKind::ActionMismatch:
    case ErrorKind::UnsupportedTag:
    case ErrorKind::NotReflexive:
      return 3;
    default:
      return 2;
  }
}

void emit(const Json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Schema, "cannot write " + path);
  out << j.dump(2) << '\n';
}

// Inline JSON when it looks like an object, a file path otherwise.
Json json_arg(const std::string& arg, const std::string& what) {
  if (!arg.empty() && arg.front() == '{') return io::parse_json_text(arg, what);
  std::ifstream in(arg);
  require(static_cast<bool>(in), ErrorKind::Schema, what + ": cannot open " + arg);
  std::stringstream buf;
  buf << in.rdbuf();
  return io::parse_json_text(buf.str(), what);
}

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); }

void render(std::ostream& os, const Preorder& p) {
  std::size_t w = 1;
  for (const auto& a : p.carrier.atoms()) w = std::max(w, a.size());
  os << pad("<=", w) << " |";
  for (const auto& a : p.carrier.atoms()) os << ' ' << pad(a, w);
  os << '\n' << std::string(w + 2 + p.carrier.size() * (w + 1), '-') << '\n';
  for (std::size_t i = 0; i < p.carrier.size(); ++i) {
    os << pad(p.carrier[i], w) << " |";
    for (std::size_t j = 0; j < p.carrier.size(); ++j) os << ' ' << pad(p.le(i, j) ? "x" : ".", w);
    os << '\n';
  }
}

void render(std::ostream& os, const Topology& t) {
  const auto opens = t.opens();
  os << opens.size() << " open sets on " << describe(t.carrier) << '\n';
  for (const auto& u : opens) os << "  " << describe(t.carrier, u) << '\n';
  os << "minimal neighbourhoods\n";
  for (std::size_t i = 0; i < t.carrier.size(); ++i)
    os << "  " << pad(t.carrier[i], 8) << ' ' << describe(t.carrier, t.nbhd[i]) << '\n';
}

template <FibreType F>
LiftingParam<F> builtin_param(const std::string& name) {
  if constexpr (std::is_same_v<F, Preorder>) {
    for (const auto& l : preorder_liftings())
      if (l.name == name) return l.param;
  } else {
    for (const auto& l : topology_liftings())
      if (l.name == name) return l.param;
  }
  throw Error(ErrorKind::UnsupportedTag, "parameter \"" + name + "\" does not apply to " +
                                             std::string(to_string(F::tag)) + " instances");
}

struct LiftOptions {
  std::string monad = "powerset";
  std::string param;
  std::string param_file;
  std::string instance;
  std::string output;
  bool json = false;
};

int cmd_lift(const LiftOptions& o) {
  require(o.monad == "powerset", ErrorKind::Schema, "unknown monad \"" + o.monad + "\"");
  require(o.param.empty() != o.param_file.empty(), ErrorKind::Schema, "give exactly one of --param or --param-file");
  const FiniteMonad m = powerset_monad();
  const FibreObject x = io::fibre_from_instance(io::load_instance(o.instance));

  auto run = [&]<FibreType F>(const F& base) -> F {
    LiftingParam<F> param;
    if (!o.param.empty()) {
      param = builtin_param<F>(o.param);
    } else {
      const auto f = io::expect_kind(io::load_instance(o.param_file), "lifting_param");
      const std::string fibre = io::detail::as_string(io::detail::field(f.payload, "fibre", "lifting_param"),
                                                      "lifting_param.fibre");
      require(fibre == io::kind_of(FibreObject{base}), ErrorKind::TagMismatch,
              "parameter fibre \"" + fibre + "\" does not match the instance");
      param = io::lifting_param_from_json<F>(m, f.payload);
    }
    return codensity_lift(m, param, base).result;
  };

  FibreObject lifted;
  if (const auto* p = std::get_if<Preorder>(&x)) lifted = run(*p);
  else if (const auto* t = std::get_if<Topology>(&x)) lifted = run(*t);
  else throw Error(ErrorKind::UnsupportedTag, "lift needs a preorder or topology instance, got " + io::kind_of(x));

  const Json out = io::wrap(io::kind_of(lifted), io::to_json(lifted));
  if (o.json) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::visit([](const auto& v) {
      using F = std::remove_cvref_t<decltype(v)>;
      if constexpr (std::is_same_v<F, Preorder> || std::is_same_v<F, Topology>) render(std::cout, v);
    }, lifted);
  }
  emit(out, o.output);
  return 0;
}

struct CheckOptions {
  std::string kind;
  std::string lmp1;
  std::string lmp2;
  std::string relation;
  bool json = false;
};

int cmd_check(const CheckOptions& o) {
  const LMP a = io::lmp_from_json(io::expect_kind(io::load_instance(o.lmp1), "lmp").payload);
  const LMP b = o.lmp2.empty() ? a : io::lmp_from_json(io::expect_kind(io::load_instance(o.lmp2), "lmp").payload);
  const Relation r =
      io::relation_from_json(io::expect_kind(io::load_instance(o.relation), "relation").payload, a.states(), b.states());
  SimResult result;
  if (o.kind == "sim1") {
    require(o.lmp2.empty(), ErrorKind::Schema, "sim1 takes a single LMP");
    result = is_simulation_single(a, r);
  } else if (o.kind == "sim2") {
    result = is_simulation_two(a, b, r);
  } else {
    result = is_bisimulation(a, b, r);
  }
  Json out{{"check", o.kind}, {"holds", result.holds}};
  if (result.witness) out["witness"] = io::to_json(*result.witness, a, b);
  if (o.json) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << o.kind << ": " << (result.holds ? "holds" : "fails") << '\n';
    if (result.witness) {
      const auto& w = out["witness"];
      std::cout << "witness: " << describe(*result.witness, a, b) << '\n'
                << "         mass(V) = " << w["mass_V"].get<std::string>()
                << ", mass(W) = " << w["mass_W"].get<std::string>() << '\n';
    }
  }
  return result.holds ? 0 : 1;
}

struct KantorovichOptions {
  std::string metric;
  std::string v1;
  std::string v2;
  bool certificate = false;
  bool oracle = false;
};

int cmd_kantorovich(const KantorovichOptions& o) {
  const auto f = io::expect_kind(io::load_instance(o.metric), "metric_space");
  const Pseudometric d = io::metric_from_json(f.payload);
  const FinMeasSpace space = io::space_from_json(d.carrier, f.payload, "metric_space");
  const SubProb v1 = io::measure_from_json(space, json_arg(o.v1, "--v1"), "--v1");
  const SubProb v2 = io::measure_from_json(space, json_arg(o.v2, "--v2"), "--v2");
  const auto result = kantorovich_solve(d, v1, v2);
  std::cout << to_string(result.value) << '\n';
  if (o.certificate) {
    std::cout << "test function (" << (result.forward ? "v1 - v2" : "v2 - v1") << "):\n";
    for (std::size_t x = 0; x < d.carrier.size(); ++x)
      std::cout << "  f(" << d.carrier[x] << ") = " << to_string(result.test_function[x]) << '\n';
  }
  if (o.oracle) {
    const Rational check = kantorovich_oracle(d, v1, v2);
    const bool agree = check == result.value;
    std::cout << "oracle: " << to_string(check) << (agree ? " (agrees)" : " (DISAGREES)") << '\n';
    if (!agree) return 1;
  }
  return 0;
}

int cmd_verify(const std::string& suite) {
  const Report report = run_suite(suite);
  std::cout << report;
  return report.passed() ? 0 : 1;
}

struct DensityOptions {
  std::string param;
  std::string pred;
  bool enumerate = false;
  std::string output;
};

int cmd_density_lift(const DensityOptions& o) {
  const auto p = io::product_param_from_json(io::expect_kind(io::load_instance(o.param), "product_param").payload);
  const Predicate x = io::pred_from_json(io::expect_kind(io::load_instance(o.pred), "pred").payload);
  const Predicate lifted = product_density_lift(p.a, p.r, p.s, x);
  std::cout << describe(lifted.carrier, lifted.members) << '\n';
  if (o.enumerate) {
    const bool agree = product_density_lift_enumerated(p.a, p.r, p.s, x) == lifted;
    std::cout << "enumeration: " << (agree ? "agrees" : "DISAGREES") << '\n';
    if (!agree) return 1;
  }
  emit(io::wrap("pred", io::to_json(lifted)), o.output);
  return 0;
}

struct StreamOptions {
  std::string param;
  std::string pred;
  std::string stream;
};

int cmd_stream_member(const StreamOptions& o) {
  const StreamParam p = io::stream_param_from_json(io::expect_kind(io::load_instance(o.param), "stream_param").payload);
  const Predicate x = io::pred_from_json(io::expect_kind(io::load_instance(o.pred), "pred").payload);
  const Lasso s = io::lasso_from_json(json_arg(o.stream, "--stream"), "--stream");
  const bool member = stream_density_member(p, x, s);
  std::cout << describe(s) << (member ? " is" : " is not") << " in the lift\n";
  return member ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codensity and density liftings at finite scale"};
  app.require_subcommand(1);

  LiftOptions lift;
  auto* lift_cmd = app.add_subcommand("lift", "Lift a preorder or topology along the powerset monad");
  lift_cmd->add_option("--monad", lift.monad, "Monad (powerset)")->capture_default_str();
  lift_cmd->add_option("--param", lift.param,
                       "Built-in parameter: lower-pre, upper-pre, convex, lower-vietoris, upper-vietoris");
  lift_cmd->add_option("--param-file", lift.param_file, "lifting_param instance with explicit (R, S) entries");
  lift_cmd->add_option("instance", lift.instance, "preorder or topology instance")->required();
  lift_cmd->add_option("-o,--output", lift.output, "Write the lifted instance here ('-' for stdout)");
  lift_cmd->add_flag("--json", lift.json, "Print JSON instead of a table");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Decide simulation or bisimulation for LMPs");
  check_cmd->add_option("kind", check.kind, "sim1, sim2 or bisim")
      ->required()
      ->check(CLI::IsMember({"sim1", "sim2", "bisim"}));
  check_cmd->add_option("--lmp,--lmp1", check.lmp1, "LMP instance (source)")->required();
  check_cmd->add_option("--lmp2", check.lmp2, "LMP instance (target)");
  check_cmd->add_option("--relation", check.relation, "relation instance")->required();
  check_cmd->add_flag("--json", check.json, "Print the verdict as JSON");

  KantorovichOptions kant;
  auto* kant_cmd = app.add_subcommand("kantorovich", "Kantorovich distance of two measures");
  kant_cmd->add_option("metric", kant.metric, "metric_space instance")->required();
  kant_cmd->add_option("--v1", kant.v1, "measure: inline JSON object of point masses or a file")->required();
  kant_cmd->add_option("--v2", kant.v2, "measure: inline JSON object of point masses or a file")->required();
  kant_cmd->add_flag("--certificate", kant.certificate, "Print an optimal test function");
  kant_cmd->add_flag("--oracle", kant.oracle, "Cross-check against vertex enumeration");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", suite, "monad-laws, lifting-laws, closed-objects, comonad-laws, engine-vs-closed-form")
      ->required();

  DensityOptions dens;
  auto* dens_cmd = app.add_subcommand("density-lift", "Density lifting for the product comonad");
  dens_cmd->add_option("--param", dens.param, "product_param instance")->required();
  dens_cmd->add_option("pred", dens.pred, "pred instance")->required();
  dens_cmd->add_flag("--enumerate", dens.enumerate, "Cross-check against direct enumeration");
  dens_cmd->add_option("-o,--output", dens.output, "Write the lifted predicate here ('-' for stdout)");

  StreamOptions stream;
  auto* stream_cmd = app.add_subcommand("stream-member", "Membership in the stream comonad lifting");
  stream_cmd->add_option("--param", stream.param, "stream_param instance")->required();
  stream_cmd->add_option("--pred", stream.pred, "pred instance")->required();
  stream_cmd->add_option("--stream", stream.stream, "{\"prefix\": [...], \"cycle\": [...]} inline or a file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*lift_cmd) return cmd_lift(lift);
    if (*check_cmd) return cmd_check(check);
    if (*kant_cmd) return cmd_kantorovich(kant);
    if (*verify_cmd) return cmd_verify(suite);
    if (*dens_cmd) return cmd_density_lift(dens);
    if (*stream_cmd) return cmd_stream_member(stream);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
