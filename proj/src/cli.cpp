#include "latnet/cli.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "latnet/dynamics.hpp"
#include "latnet/errors.hpp"
#include "latnet/kripke.hpp"
#include "latnet/specfile.hpp"

namespace latnet::cli {

namespace {

// ----- small shared helpers -------------------------------------------------

std::string node_list(const std::vector<int>& nodes) {
  std::string s;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(nodes[i]);
  }
  return s;
}

void write_trace_csv(std::ostream& os, const std::vector<GossipTraceRow>& rows) {
  os << "t,fired,energy\n";
  for (const auto& r : rows) {
    os << r.t << "," << node_list(r.fired) << ",";
    if (r.energy) os << *r.energy;
    os << "\n";
  }
}

// Writes the CSV to `path` when nonempty, else to `out`. Returns false (with
// a diagnostic) when the file cannot be created.
bool emit_csv(const std::string& path, std::ostream& out, std::ostream& err,
              const std::vector<GossipTraceRow>& rows) {
  if (path.empty()) {
    write_trace_csv(out, rows);
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write '" << path << "'\n";
    return false;
  }
  write_trace_csv(f, rows);
  return true;
}

void dump_state(std::ostream& out, const TarskiSheaf& s, const Cochain0& x) {
  out << "final state:\n";
  for (int i = 0; i < s.g.n; ++i) out << "  " << i << ": " << s.F(i).label(x[i]) << "\n";
}

std::vector<GossipTraceRow> heat_rows(const TarskiSheaf& s, const HeatFlowResult& res,
                                      EdgeMetric metric) {
  std::vector<GossipTraceRow> rows;
  rows.reserve(res.trajectory.size());
  for (size_t t = 0; t < res.trajectory.size(); ++t)
    rows.push_back({static_cast<long long>(t),
                    {},
                    dirichlet_energy(s, res.trajectory[t], metric),
                    res.trajectory[t]});
  return rows;
}

EdgeMetric metric_from(const std::string& name) {
  if (name == "hamming") return EdgeMetric::hamming;
  if (name == "hasse") return EdgeMetric::hasse;
  return EdgeMetric::automatic;
}

// Schedule files: one round per line, node ids separated by spaces or
// commas; '#' starts a comment. A first line consisting of the word
// "periodic" makes the listed rounds cycle forever; otherwise they run once
// (so short lists can exhaust, which surfaces as exit code 2).
BroadcastSequence schedule_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schedule file '" + path + "'");
  bool periodic = false, first = true;
  std::vector<std::vector<int>> rounds;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::string tok;
    std::vector<int> round;
    bool header = false;
    while (ls >> tok) {
      if (first && tok == "periodic" && round.empty()) {
        periodic = true;
        header = true;
        break;
      }
      try {
        round.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ParseError("schedule file: bad node id '" + tok + "'");
      }
    }
    if (!header && !round.empty()) {
      rounds.push_back(std::move(round));
      first = false;
    }
    if (header) first = false;
  }
  if (rounds.empty()) throw ParseError("schedule file lists no rounds");
  return periodic ? BroadcastSequence::periodic(std::move(rounds))
                  : BroadcastSequence::explicit_list(std::move(rounds));
}

BroadcastSequence resolve_schedule(const std::string& flag, std::uint64_t seed,
                                   const BuiltSpec& spec) {
  if (flag == "sync") return BroadcastSequence::synchronous();
  if (flag == "uniform1") return BroadcastSequence::uniform_single(seed);
  if (flag.rfind("file:", 0) == 0) return schedule_from_file(flag.substr(5));
  if (!flag.empty()) throw ParseError("unknown schedule '" + flag + "'");
  if (spec.schedule) return *spec.schedule;
  return BroadcastSequence::synchronous();
}

// ----- subcommand bodies ------------------------------------------------------

int cmd_sections(const std::string& spec_path, std::ostream& out) {
  BuiltSpec spec = build_spec(load_spec_file(spec_path));
  auto sections = sections_bruteforce(spec.sheaf);
  std::vector<std::string> lines;
  lines.reserve(sections.size());
  for (const auto& sec : sections) {
    std::string s = "(";
    for (int i = 0; i < spec.sheaf.g.n; ++i) {
      if (i) s += ", ";
      s += spec.sheaf.F(i).label(sec[i]);
    }
    lines.push_back(s + ")");
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << "\n";
  out << lines.size() << " sections\n";
  return 0;
}

int cmd_heat(const std::string& spec_path, long long max_steps, const std::string& metric_name,
             const std::string& out_path, std::ostream& out, std::ostream& err) {
  BuiltSpec spec = build_spec(load_spec_file(spec_path));
  const EdgeMetric metric = metric_from(metric_name);
  HeatFlowResult res = heat_flow(spec.sheaf, spec.x0, max_steps);
  if (!emit_csv(out_path, out, err, heat_rows(spec.sheaf, res, metric))) return 1;
  out << (res.reached_fixed_point ? "converged" : "not converged") << " after " << res.steps()
      << " steps\n";
  out << "section: " << (is_section(spec.sheaf, res.final_state()) ? "yes" : "no") << "\n";
  dump_state(out, spec.sheaf, res.final_state());
  return res.reached_fixed_point ? 0 : 2;
}

int cmd_gossip(const std::string& spec_path, const std::string& schedule_flag,
               std::uint64_t seed, long long max_steps, const std::string& metric_name,
               const std::string& out_path, std::ostream& out, std::ostream& err) {
  BuiltSpec spec = build_spec(load_spec_file(spec_path));
  BroadcastSequence schedule = resolve_schedule(schedule_flag, seed, spec);
  GossipOptions opt;
  opt.max_steps = max_steps;
  opt.metric = metric_from(metric_name);
  GossipResult res = gossip(spec.sheaf, spec.x0, schedule, opt);
  if (!emit_csv(out_path, out, err, res.trace)) return 1;
  out << (res.converged ? "converged" : "not converged") << " after " << res.steps()
      << " steps\n";
  out << "section: " << (is_section(spec.sheaf, res.final_state()) ? "yes" : "no") << "\n";
  dump_state(out, spec.sheaf, res.final_state());
  return res.converged ? 0 : 2;
}

struct ExperimentConfig {
  int n = 40;
  double radius = 0.08;
  int states = 10;
  double p_diag = 0.9;
  double p_off = 0.1;
  int trials = 10;
  std::uint64_t seed = 0;
  long long max_steps = 1'000'000;
  std::string out_prefix = "experiment";
};

// Seed layout (all derived from one root so runs are reproducible): one fork
// for the point cloud, one fork for the relation coins (agent-major, then
// state-row-major, diagonal coin at y == x), then per trial one fork for the
// initial cochain followed by one raw draw for the schedule seed.
int cmd_experiment(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.n < 1 || cfg.states < 1 || cfg.states > 12 || cfg.trials < 1 || cfg.radius < 0 ||
      cfg.p_diag < 0 || cfg.p_diag > 1 || cfg.p_off < 0 || cfg.p_off > 1) {
    err << "error: experiment parameters out of range\n";
    return 1;
  }
  SplitMix64 root(cfg.seed);

  auto point_rng = root.fork();
  GeometricGraph geo = random_geometric_graph(cfg.n, cfg.radius, point_rng);

  auto rel_rng = root.fork();
  std::vector<std::string> states;
  for (int s = 0; s < cfg.states; ++s) states.push_back(std::to_string(s));
  std::vector<std::vector<std::pair<int, int>>> relations(cfg.n);
  for (int a = 0; a < cfg.n; ++a)
    for (int x = 0; x < cfg.states; ++x)
      for (int y = 0; y < cfg.states; ++y)
        if (rel_rng.coin(x == y ? cfg.p_diag : cfg.p_off)) relations[a].emplace_back(x, y);
  KripkeModel model = make_kripke_model(states, relations, {},
                                        std::vector<std::vector<std::string>>(cfg.states));
  TarskiSheaf sheaf = kripke_sheaf(model, geo.graph);

  out << "graph: " << cfg.n << " nodes, " << geo.graph.edges.size() << " edges\n";
  int failures = 0;
  for (int t = 0; t < cfg.trials; ++t) {
    auto init_rng = root.fork();
    Cochain0 x0(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      x0[i] = static_cast<int>(init_rng.below(1u << cfg.states));
    const std::uint64_t sched_seed = root.next();

    GossipOptions opt;
    opt.max_steps = cfg.max_steps;
    GossipResult res = gossip(sheaf, x0, BroadcastSequence::uniform_single(sched_seed), opt);

    const std::string path = cfg.out_prefix + "_trial" + std::to_string(t) + ".csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << path << "'\n";
      return 1;
    }
    write_trace_csv(f, res.trace);

    const double final_energy = res.trace.back().energy.value_or(-1);
    const bool section = is_section(sheaf, res.final_state());
    out << "trial " << t << ": steps=" << res.steps() << " converged="
        << (res.converged ? "yes" : "no") << " final_energy=" << final_energy
        << " section=" << (section ? "yes" : "no") << " -> " << path << "\n";
    if (!res.converged) ++failures;
  }
  return failures ? 2 : 0;
}

// Hard-coded reference tables for the three-agent worked example; the demo
// recomputes every value and flags the entries where the reference differs
// from what the adjunctions force.
int cmd_kripke_demo(std::ostream& out) {
  const KripkeModel m = three_agent_example_model();
  const Graph g = three_agent_example_graph();

  auto set = [&](uint32_t e) {
    std::string s = "{";
    for (int b = 0; b < m.n_states(); ++b)
      if (e >> b & 1) {
        if (s.size() > 1) s += ",";
        s += m.states[b];
      }
    return s + "}";
  };

  // Events listed by size then by mask; per event the reference gives
  // (exists, forall) per agent.
  const std::array<uint32_t, 8> events = {0, 1, 2, 4, 3, 5, 6, 7};
  const std::array<std::array<uint32_t, 6>, 8> galois_ref = {{
      {0, 0, 0, 0, 0, 0},        // {}
      {3, 0, 5, 0, 5, 0},        // {r}
      {7, 0, 2, 2, 3, 0},        // {s}
      {6, 0, 5, 0, 6, 0},        // {t}
      {7, 1, 7, 2, 7, 2},        // {r,s}
      {7, 7, 5, 5, 7, 1},        // {r,t}
      {7, 7, 7, 7, 7, 4},        // {s,t}
      {7, 7, 7, 7, 7, 7},        // {r,s,t}
  }};

  int divergences = 0;
  auto cell = [&](uint32_t got, uint32_t ref) {
    std::string s = set(got);
    if (got != ref) {
      s += " [ref " + set(ref) + "]";
      ++divergences;
    }
    return s;
  };

  out << "Knowledge operators per agent (computed; [ref ...] marks reference"
         " entries that disagree)\n";
  out << "event | agent0 exists / forall | agent1 exists / forall | agent2 exists / forall\n";
  for (size_t row = 0; row < events.size(); ++row) {
    const uint32_t e = events[row];
    out << set(e);
    for (int a = 0; a < 3; ++a) {
      out << " | " << cell(know_exists(m, a, e), galois_ref[row][2 * a]) << " / "
          << cell(know_forall(m, a, e), galois_ref[row][2 * a + 1]);
    }
    out << "\n";
  }

  const std::array<std::array<uint32_t, 3>, 6> lap_in = {{
      {0, 0, 0},
      {1, 2, 4},
      {2, 1, 4},
      {4, 4, 4},
      {2, 2, 2},
      {7, 7, 7},
  }};
  const std::array<std::array<uint32_t, 3>, 6> lap_ref = {{
      {0, 0, 0},
      {0, 2, 0},
      {7, 7, 1},
      {7, 7, 1},
      {0, 2, 0},
      {7, 7, 7},
  }};

  out << "\nLaplacian rows (computed; [ref ...] marks reference entries that disagree)\n";
  for (size_t row = 0; row < lap_in.size(); ++row) {
    EventTuple e(lap_in[row].begin(), lap_in[row].end());
    EventTuple le = kripke_laplacian(m, g, e);
    out << "L(" << set(e[0]) << ", " << set(e[1]) << ", " << set(e[2]) << ") = (";
    for (int i = 0; i < 3; ++i) {
      if (i) out << ", ";
      out << cell(le[i], lap_ref[row][i]);
    }
    out << ")\n";
  }
  out << "\n" << divergences << " entries differ from the reference tables\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite-lattice sheaf dynamics toolkit"};
  app.require_subcommand(1);

  std::string spec_path, schedule_flag, metric_name, out_path;
  std::uint64_t seed = 0;
  long long max_steps_heat = -1, max_steps_gossip = 1'000'000;
  ExperimentConfig cfg;

  auto* sections = app.add_subcommand("sections", "enumerate the global sections of a sheaf");
  sections->add_option("--spec", spec_path, "sheaf description (JSON)")->required();

  auto* heat = app.add_subcommand("heat", "synchronous fixed-point iteration with energy trace");
  heat->add_option("--spec", spec_path, "sheaf description (JSON)")->required();
  heat->add_option("--max-steps", max_steps_heat, "step budget (default: chain-height bound)");
  heat->add_option("--metric", metric_name, "edge metric")
      ->check(CLI::IsMember({"hamming", "hasse"}));
  heat->add_option("--out", out_path, "write the CSV trace here instead of stdout");

  auto* gossip = app.add_subcommand("gossip", "asynchronous broadcast iteration");
  gossip->add_option("--spec", spec_path, "sheaf description (JSON)")->required();
  gossip->add_option("--schedule", schedule_flag, "sync | uniform1 | file:PATH");
  gossip->add_option("--seed", seed, "seed for the uniform1 schedule");
  gossip->add_option("--max-steps", max_steps_gossip, "step budget");
  gossip->add_option("--metric", metric_name, "edge metric")
      ->check(CLI::IsMember({"hamming", "hasse"}));
  gossip->add_option("--out", out_path, "write the CSV trace here instead of stdout");

  auto* experiment =
      app.add_subcommand("experiment", "random geometric network of knowledge relations");
  experiment->add_option("--n", cfg.n, "node count");
  experiment->add_option("--radius", cfg.radius, "geometric connection radius");
  experiment->add_option("--states", cfg.states, "state count (<= 12)");
  experiment->add_option("--p-diag", cfg.p_diag, "probability of a reflexive relation pair");
  experiment->add_option("--p-off", cfg.p_off, "probability of a non-reflexive relation pair");
  experiment->add_option("--trials", cfg.trials, "number of seeded runs");
  experiment->add_option("--seed", cfg.seed, "root seed");
  experiment->add_option("--max-steps", cfg.max_steps, "per-trial step budget");
  experiment->add_option("--out", cfg.out_prefix, "output path prefix for per-trial CSVs");

  auto* demo = app.add_subcommand("kripke-demo",
                                  "worked three-agent example with reference comparison");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sections->parsed()) return cmd_sections(spec_path, out);
    if (heat->parsed())
      return cmd_heat(spec_path, max_steps_heat, metric_name, out_path, out, err);
    if (gossip->parsed())
      return cmd_gossip(spec_path, schedule_flag, seed, max_steps_gossip, metric_name, out_path,
                        out, err);
    if (experiment->parsed()) return cmd_experiment(cfg, out, err);
    if (demo->parsed()) return cmd_kripke_demo(out);
  } catch (const TooLarge& e) {
    err << "error (guard): " << e.what() << "\n";
    return 3;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace latnet::cli
