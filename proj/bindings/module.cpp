// Python bindings for the main operations: partitioning, watermarked action
// selection, detection statistics, chess rules, and the theory verifiers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gamemark/chess/pgn.hpp"
#include "gamemark/chess/position.hpp"
#include "gamemark/detect/detect.hpp"
#include "gamemark/efg/random_tree.hpp"
#include "gamemark/efg/verify.hpp"
#include "gamemark/match/synthetic.hpp"
#include "gamemark/watermark/watermark.hpp"

namespace py = pybind11;
using namespace gamemark;

namespace {

wm::WatermarkParams make_params(double gamma, double delta, const py::bytes& key,
                                int min_branching) {
  wm::WatermarkParams params;
  params.gamma = gamma;
  params.delta = delta;
  params.key = std::string(key);
  params.min_branching = min_branching;
  params.validate();
  return params;
}

efg::RandomTreeSpec make_tree_spec(int depth, int branching, int players,
                                   std::uint64_t payoff_seed, double value_spread) {
  efg::RandomTreeSpec spec;
  spec.depth = depth;
  spec.branching = branching;
  spec.players = players;
  spec.payoff_seed = payoff_seed;
  spec.value_spread = value_spread;
  spec.validate();
  return spec;
}

py::dict report_to_dict(const detect::DetectionReport& report) {
  py::dict out;
  out["n"] = report.n;
  out["n_green"] = report.n_green;
  out["skipped"] = report.skipped;
  out["z"] = report.z;
  out["p_value"] = report.p;
  out["insufficient_data"] = report.insufficient_data;
  out["z_by_round"] = report.z_by_round;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gamemark: watermarking and detection for game-playing strategies";

  // --- hashing / partition ---
  m.def("fnv1a64",
        [](const py::bytes& data) { return wm::fnv1a64(std::string(data)); },
        py::arg("data"));
  m.def("seed_from_observation",
        [](const py::bytes& obs, const py::bytes& key) {
          return wm::seed_from_observation(std::string(obs), std::string(key));
        },
        py::arg("observation"), py::arg("key") = py::bytes(""));
  m.def("partition_actions",
        [](const std::vector<std::string>& actions, std::uint64_t seed,
           double gamma) {
          const wm::Partition part = wm::partition_actions(actions, seed, gamma);
          return py::make_tuple(part.green, part.red);
        },
        py::arg("actions"), py::arg("seed"), py::arg("gamma"),
        "Returns (green, red), both in canonical order.");

  // --- watermark ---
  m.def("next_action",
        [](const py::bytes& obs, const std::vector<std::string>& actions,
           const std::vector<double>& values, double gamma, double delta,
           const py::bytes& key, int min_branching) {
          const auto decision = wm::next_action(
              std::string(obs), actions, values,
              make_params(gamma, delta, key, min_branching));
          py::dict out;
          out["action"] = decision.action;
          out["index"] = decision.action_index;
          out["watermarked"] = decision.watermarked;
          out["green"] = decision.green;
          out["seed"] = decision.seed;
          return out;
        },
        py::arg("observation"), py::arg("actions"), py::arg("values"),
        py::arg("gamma") = 0.25, py::arg("delta") = 0.5,
        py::arg("key") = py::bytes(""), py::arg("min_branching") = 2);
  m.def("watermarked_expected_utility",
        [](const std::vector<std::tuple<py::bytes, std::vector<std::string>,
                                        std::string>>& trajectory,
           double oracle_value, double gamma, double delta, const py::bytes& key,
           int min_branching) {
          std::vector<wm::TrajectoryStep> steps;
          for (const auto& [obs, actions, chosen] : trajectory)
            steps.push_back({std::string(obs), actions, chosen});
          return wm::watermarked_expected_utility(
              steps, oracle_value, make_params(gamma, delta, key, min_branching));
        },
        py::arg("trajectory"), py::arg("oracle_value"), py::arg("gamma") = 0.25,
        py::arg("delta") = 0.5, py::arg("key") = py::bytes(""),
        py::arg("min_branching") = 2,
        "trajectory: list of (observation, actions, chosen) prefix steps.");

  // --- detection ---
  m.def("z_score", &detect::z_score, py::arg("n_green"), py::arg("n"),
        py::arg("gamma"));
  m.def("p_value", &detect::p_value, py::arg("z"));
  m.def("classify_move",
        [](const py::bytes& obs, const std::vector<std::string>& actions,
           const std::string& chosen, double gamma, const py::bytes& key,
           int min_branching) -> std::string {
          detect::MoveRecord rec;
          rec.observation = std::string(obs);
          rec.actions = actions;
          rec.chosen = chosen;
          switch (detect::classify_move(rec,
                                        make_params(gamma, 0.0, key, min_branching))) {
            case detect::Classification::kGreen: return "green";
            case detect::Classification::kRed: return "red";
            default: return "skipped";
          }
        },
        py::arg("observation"), py::arg("actions"), py::arg("chosen"),
        py::arg("gamma") = 0.25, py::arg("key") = py::bytes(""),
        py::arg("min_branching") = 2);
  m.def("analyze_trace",
        [](const std::string& path, double gamma, const py::bytes& key,
           int player, int min_branching) {
          const auto records = detect::read_trace_file(path);
          return report_to_dict(detect::analyze(
              records, make_params(gamma, 0.0, key, min_branching), player));
        },
        py::arg("path"), py::arg("gamma") = 0.25, py::arg("key") = py::bytes(""),
        py::arg("player") = 0, py::arg("min_branching") = 2);
  m.def("roc_auc",
        [](const std::vector<double>& z_watermarked,
           const std::vector<double>& z_clean) {
          return detect::roc(z_watermarked, z_clean).auc;
        },
        py::arg("z_watermarked"), py::arg("z_clean"));

  // --- chess rules ---
  m.def("legal_moves",
        [](const std::string& fen) {
          std::vector<std::string> out;
          for (const chess::Move& m : chess::legal_moves(chess::parse_fen(fen)))
            out.push_back(m.uci());
          return out;
        },
        py::arg("fen"));
  m.def("apply_move",
        [](const std::string& fen, const std::string& move) {
          return chess::emit_fen(chess::apply_move(chess::parse_fen(fen),
                                                   chess::Move::parse(move)));
        },
        py::arg("fen"), py::arg("move"));
  m.def("observation",
        [](const std::string& fen) {
          return py::bytes(chess::observation(chess::parse_fen(fen)));
        },
        py::arg("fen"));
  m.def("game_status",
        [](const std::string& fen) {
          return chess::status_name(chess::game_status(chess::parse_fen(fen)));
        },
        py::arg("fen"));
  m.def("perft",
        [](const std::string& fen, int depth) {
          return chess::perft(chess::parse_fen(fen), depth);
        },
        py::arg("fen"), py::arg("depth"));
  m.def("pgn_records",
        [](const std::string& text) {
          py::list games;
          int round = 0;
          for (const chess::PgnGame& game : chess::parse_pgn(text)) {
            py::list records;
            for (const auto& rec : chess::to_move_records(game, round)) {
              py::dict r;
              r["observation"] = py::bytes(rec.observation);
              r["actions"] = rec.actions;
              r["chosen"] = rec.chosen;
              r["player"] = rec.player;
              r["round"] = rec.round;
              r["move"] = rec.move;
              records.append(std::move(r));
            }
            games.append(std::move(records));
            ++round;
          }
          return games;
        },
        py::arg("pgn_text"));

  // --- theory verification ---
  m.def("verify_loss_bound",
        [](int depth, int branching, int players, std::uint64_t payoff_seed,
           double gamma, double delta, int watermarked_player) {
          const efg::RandomTreeGame game(
              make_tree_spec(depth, branching, players, payoff_seed, 1.0));
          const auto rep = efg::verify_loss_bound(
              game, make_params(gamma, delta, py::bytes(""), 2),
              watermarked_player);
          py::dict out;
          out["violations"] = rep.violations;
          out["trajectories"] = rep.trajectories.size();
          out["per_decision_cap"] = rep.per_decision_cap;
          out["oracle_root_value"] = rep.oracle_root_value;
          return out;
        },
        py::arg("depth"), py::arg("branching"), py::arg("players"),
        py::arg("payoff_seed"), py::arg("gamma") = 0.25, py::arg("delta") = 0.5,
        py::arg("watermarked_player") = 0);
  m.def("simulate_theorem1",
        [](double p, int n, double t, double gamma, double delta, int trials,
           std::uint64_t seed) {
          const auto rep =
              efg::simulate_theorem1(p, n, t, gamma, delta, trials, seed);
          py::dict out;
          out["empirical_probability"] = rep.empirical_probability;
          out["paper_bound"] = rep.paper_bound;
          out["hoeffding_bound"] = rep.hoeffding_bound;
          out["mc_stderr"] = rep.mc_stderr;
          out["satisfied"] = rep.satisfied;
          return out;
        },
        py::arg("p"), py::arg("n"), py::arg("t"), py::arg("gamma") = 0.25,
        py::arg("delta") = 0.5, py::arg("trials") = 100000,
        py::arg("seed") = 0x5eed);

  // --- synthetic streams ---
  m.def("simulate_null_z",
        [](int decisions, int branching, double gamma, std::uint64_t seed) {
          match::SyntheticSpec spec;
          spec.decisions = decisions;
          spec.branching = branching;
          spec.seed = seed;
          match::AgentSpec agent;
          agent.kind = match::AgentKind::kOblivious;
          const auto outcome = match::run_attacker(
              spec, make_params(gamma, 0.5, py::bytes(""), 2), agent);
          return report_to_dict(outcome.report);
        },
        py::arg("decisions"), py::arg("branching") = 20, py::arg("gamma") = 0.25,
        py::arg("seed") = 1);
  m.def("simulate_watermarked_z",
        [](int decisions, int branching, double gamma, double delta,
           std::uint64_t seed) {
          match::SyntheticSpec spec;
          spec.decisions = decisions;
          spec.branching = branching;
          spec.seed = seed;
          const auto outcome = match::run_attacker(
              spec, make_params(gamma, delta, py::bytes(""), 2), {});
          return report_to_dict(outcome.report);
        },
        py::arg("decisions"), py::arg("branching") = 20, py::arg("gamma") = 0.25,
        py::arg("delta") = 0.5, py::arg("seed") = 1);

  m.attr("START_FEN") = chess::kStartFen;
}
