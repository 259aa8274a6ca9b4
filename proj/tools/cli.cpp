#include "cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mslift/decompose.hpp"
#include "mslift/errors.hpp"
#include "mslift/io.hpp"
#include "mslift/lift.hpp"
#include "mslift/plot.hpp"
#include "mslift/solver.hpp"
#include "mslift/tolerances.hpp"

namespace mslift::cli {
namespace {

using io::Json;

struct Shared {
  double alpha = 1.0;
  double beta = 0.0;
  std::string g_path;
  std::string report_path;
  std::string plot_path;
  std::uint64_t seed = 0;
  double tol = 1e-8;
};

void add_shared(CLI::App* cmd, Shared& s, bool params_required) {
  auto* a = cmd->add_option("--alpha", s.alpha, "jump penalty (> 0)");
  auto* b = cmd->add_option("--beta", s.beta, "fidelity weight (>= 0)");
  if (params_required) {
    a->required();
    b->required();
  }
  cmd->add_option("--g", s.g_path, "measurement g as a function JSON (default: g = 0)");
  cmd->add_option("--report", s.report_path, "also write the JSON report here");
  cmd->add_option("--plot", s.plot_path, "write an SVG figure here");
  cmd->add_option("--seed", s.seed, "seed for generated data");
  cmd->add_option("--tol", s.tol, "certification margin tolerance");
}

/// Runs a reader and prefixes its validation message with the file name.
template <typename F>
auto in_file(const std::string& file, F&& read) {
  try {
    return read();
  } catch (const ValidationError& e) {
    throw ValidationError(file + ": " + e.what());
  }
}

template <typename Reader>
auto load(const std::string& file, Reader reader) {
  const Json j = io::read_json_file(file);
  return in_file(file, [&] { return reader(j, "$"); });
}

Measurement load_g(const Shared& s, const Interval& iv) {
  if (s.g_path.empty()) return Measurement(SbvFunction::constant(iv, 0.0));
  SbvFunction g = load(s.g_path, io::sbv_from_json);
  if (!(g.interval() == iv)) throw ValidationError(s.g_path + ": $.domain: differs from the input's interval");
  return Measurement(std::move(g));
}

void emit(const Json& report, const Shared& s, std::ostream& out) {
  out << report.dump(2) << '\n';
  if (!s.report_path.empty()) io::write_json_file(s.report_path, report);
}

Json lift_breakdown(const SbvFunction& u, const LiftParams& lp) {
  return {{"total", ms_energy(u, lp.g, lp.ms)},
          {"dirichlet", dirichlet_energy(u)},
          {"fidelity", fidelity_energy(u, lp.g)},
          {"jumps", u.jumps().size()},
          {"alpha", lp.ms.alpha},
          {"beta", lp.ms.beta},
          {"dirichlet_term", kDirichletTermConvention}};
}

GraphCombination parts_of(const Decomposition& d) { return d.as_combination(); }

Json demo_coarea(const Shared& s) {
  const Interval iv{0.0, 1.0};
  const SbvFunction u1(iv, {{{0.0, 0.5}, {0.0, 0.0}}, {{0.5, 1.0}, {0.5, 1.0}}});
  const SbvFunction u2(iv, {{{0.0, 0.5}, {0.0, 0.5}}, {{0.5, 1.0}, {1.0, 1.0}}});
  const LiftParams lp{MsParams(1.0, 0.0), Measurement(SbvFunction::constant(iv, 0.0))};
  const GraphCombination t(iv, {{0.5, u1}, {0.5, u2}});
  const double naive = 0.5 * ms_energy(u1, lp.g, lp.ms) + 0.5 * ms_energy(u2, lp.g, lp.ms);
  const LiftReport lift = evaluate(t, lp);
  const Decomposition d = decompose(t, lp);
  Json parts = Json::array();
  for (const auto& p : d.parts) {
    parts.push_back({{"mu", p.mu}, {"energy", ms_energy(p.w, lp.g, lp.ms)}, {"jumps", p.w.jumps().size()}});
  }
  if (!s.plot_path.empty()) {
    plot::write_svg(s.plot_path, {{"input: 1/2 u1 + 1/2 u2", t}, {"decomposition", parts_of(d)}});
  }
  return {{"demo", "coarea-counterexample"},
          {"alpha", 1.0},
          {"beta", 0.0},
          {"naive_average", naive},
          {"lifted", lift.total},
          {"parts", parts},
          {"decomposition", io::to_json(d)}};
}

Json demo_swap(const Shared& s) {
  const Interval iv{0.0, 4.0};
  const SbvFunction u1(iv, {{{0.0, 2.0}, {0.0, 2.0}}, {{2.0, 4.0}, {3.0, 5.0}}});
  const SbvFunction u2(iv, {{{0.0, 2.0}, {0.0, 3.0}}, {{2.0, 4.0}, {4.0, 5.0}}});
  const LiftParams lp{MsParams(1.0, 0.0), Measurement(SbvFunction::constant(iv, 0.0))};
  const GraphCombination t(iv, {{0.5, u1}, {0.5, u2}});
  std::vector<ProvenanceStep> log;
  const GraphCombination swapped = swap_adjacent_block(t, &log);
  Json after = Json::array();
  for (std::size_t i = 0; i < swapped.size(); ++i) {
    const auto& w = swapped.terms()[i].func;
    Json jumps = Json::array();
    for (const Jump& j : w.jumps()) jumps.push_back({{"x", j.x}, {"left", j.left}, {"right", j.right}});
    after.push_back({{"name", "w" + std::to_string(i + 1)},
                     {"weight", swapped.terms()[i].weight},
                     {"energy", ms_energy(w, lp.g, lp.ms)},
                     {"jumps", jumps},
                     {"func", io::to_json(w)}});
  }
  if (!s.plot_path.empty()) plot::write_svg(s.plot_path, {{"before: u1, u2", t}, {"after swap: w1, w2", swapped}});
  return {{"demo", "figure3-swap"},
          {"naive_average", 0.5 * ms_energy(u1, lp.g, lp.ms) + 0.5 * ms_energy(u2, lp.g, lp.ms)},
          {"lifted", evaluate(t, lp).total},
          {"swaps", log.size()},
          {"parts", after}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mumford-Shah energy, its convex lift on graph combinations, and minimality certificates", "mslift"};
  app.require_subcommand(1);
  Shared s;

  std::string func_path, combo_path, dirichlet_path, competitors_path, csv_path, demo_name;
  std::size_t n = 64;
  std::size_t generate = 0;
  std::vector<double> inner;
  bool brute = false;

  auto* eval = app.add_subcommand("eval", "Mumford-Shah energy of one function");
  add_shared(eval, s, true);
  eval->add_option("--func", func_path, "function JSON")->required();

  auto* lift = app.add_subcommand("lift", "lifted energy of a graph combination");
  add_shared(lift, s, true);
  lift->add_option("--combo", combo_path, "combination JSON")->required();
  lift->add_option("--csv", csv_path, "write the column profiles as CSV here");

  auto* dec = app.add_subcommand("decompose", "convex decomposition of a graph combination");
  add_shared(dec, s, true);
  dec->add_option("--combo", combo_path, "combination JSON")->required();

  auto* mini = app.add_subcommand("minimize", "discrete minimizer on a uniform grid");
  add_shared(mini, s, true);
  mini->add_option("--n", n, "grid nodes (>= 4)");
  mini->add_option("--dirichlet", dirichlet_path, "Dirichlet spec JSON");
  mini->add_flag("--brute-force", brute, "enumerate every jump set (n <= 12)");

  auto* cert = app.add_subcommand("certify", "minimality certificates against competitors");
  add_shared(cert, s, true);
  cert->add_option("--func", func_path, "candidate function JSON")->required();
  cert->add_option("--inner", inner, "inner interval A B")->expected(2)->required();
  auto* comp_opt = cert->add_option("--competitors", competitors_path, "JSON {\"competitors\":[combination, ...]}");
  cert->add_option("--generate", generate, "number of generated competitors")->excludes(comp_opt);

  auto* demo = app.add_subcommand("demo", "built-in demonstrations");
  add_shared(demo, s, false);
  demo->add_option("name", demo_name, "coarea-counterexample | figure3-swap")->required();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  try {
    if (demo->parsed()) {
      if (demo_name == "coarea-counterexample") {
        emit(demo_coarea(s), s, out);
      } else if (demo_name == "figure3-swap") {
        emit(demo_swap(s), s, out);
      } else {
        throw ValidationError("demo: unknown name '" + demo_name + "'");
      }
      return kExitOk;
    }

    const MsParams ms(s.alpha, s.beta);
    if (eval->parsed()) {
      const SbvFunction u = load(func_path, io::sbv_from_json);
      const LiftParams lp{ms, load_g(s, u.interval())};
      if (!s.plot_path.empty()) plot::write_svg(s.plot_path, {{"u", GraphCombination::single(u)}});
      emit(lift_breakdown(u, lp), s, out);
    } else if (lift->parsed() || dec->parsed()) {
      const GraphCombination t = load(combo_path, io::combination_from_json);
      const LiftParams lp{ms, load_g(s, t.interval())};
      if (lift->parsed()) {
        const LiftReport r = evaluate(t, lp);
        if (!csv_path.empty()) {
          std::ofstream csv(csv_path);
          if (!csv) throw std::runtime_error(csv_path + ": cannot write file");
          io::write_profile_csv(csv, r);
        }
        if (!s.plot_path.empty()) plot::write_svg(s.plot_path, {{"T", t}});
        emit(io::to_json(r), s, out);
      } else {
        const Decomposition d = decompose(t, lp);
        if (!s.plot_path.empty()) plot::write_svg(s.plot_path, {{"input", t}, {"decomposition", parts_of(d)}});
        emit(io::to_json(d), s, out);
      }
    } else if (mini->parsed()) {
      if (s.g_path.empty()) throw ValidationError("minimize: --g is required");
      const Measurement g(load(s.g_path, io::sbv_from_json));
      std::optional<DirichletSpec> spec;
      if (!dirichlet_path.empty()) spec = load(dirichlet_path, io::dirichlet_from_json);
      if (brute && n > kBruteForceMaxNodes) throw ValidationError("minimize: --brute-force needs --n <= 12");
      const MinimizeResult r = brute ? brute_force_minimize(g, ms, spec, n) : minimize(g, ms, spec, n);
      if (!s.plot_path.empty()) {
        plot::write_svg(s.plot_path, {{"g", GraphCombination::single(g.function())},
                                      {"minimizer", GraphCombination::single(r.u)}});
      }
      emit(io::to_json(r), s, out);
    } else if (cert->parsed()) {
      const SbvFunction u = load(func_path, io::sbv_from_json);
      const Domain d(u.interval().a, u.interval().b, inner[0], inner[1]);
      const LiftParams lp{ms, load_g(s, u.interval())};
      std::vector<GraphCombination> comps;
      if (!competitors_path.empty()) {
        const Json j = io::read_json_file(competitors_path);
        if (!j.is_object() || j.size() != 1 || !j.contains("competitors") || !j["competitors"].is_array()) {
          throw ValidationError(competitors_path + ": $: expected {\"competitors\": [...]}");
        }
        for (std::size_t i = 0; i < j["competitors"].size(); ++i) {
          comps.push_back(in_file(competitors_path, [&] {
            return io::combination_from_json(j["competitors"][i], "$.competitors[" + std::to_string(i) + "]");
          }));
        }
      } else if (generate > 0) {
        comps = perturb_inside(u, d, s.seed, generate);
      } else {
        throw ValidationError("certify: give --competitors PATH or --generate K");
      }
      const CertificateReport r = certify_minimality(u, lp, d, comps, s.tol);
      if (!s.plot_path.empty() && !comps.empty()) {
        plot::write_svg(s.plot_path, {{"candidate", GraphCombination::single(u)}, {"competitor 0", comps.front()}});
      }
      emit(io::to_json(r), s, out);
      return r.certified ? kExitOk : kExitComputation;
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitComputation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace mslift::cli
