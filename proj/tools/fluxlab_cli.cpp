// Command-line driver: runs the named experiments on a config and writes CSV
// tables, SVG figures and a verdict summary into the output directory.
//
// Exit status: 0 when every verdict passes, 1 when some verdict fails, 2 on
// configuration or I/O errors.

#include "fluxlab/config.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/experiments.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace fluxlab;

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

class Runner {
 public:
  Runner(ExperimentConfig cfg, fs::path out) : cfg_(std::move(cfg)), out_(std::move(out)) {}

  void run(const std::string& name) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<Verdict> verdicts;
    if (name == "sweep") verdicts = sweep();
    if (name == "circle") verdicts = circle();
    if (name == "slit") verdicts = slit();
    if (name == "multiplicity") verdicts = multiplicity();
    if (name == "cover") verdicts = cover();
    if (name == "nodal") verdicts = nodal();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << name << ": " << verdicts.size() << " verdicts in " << seconds << " s\n";
    write_verdicts(std::cout, name, verdicts);
    all_.emplace_back(name, std::move(verdicts));
  }

  bool finish() {
    auto summary = open_output(out_ / "verdicts.txt");
    bool ok = true;
    for (const auto& [name, verdicts] : all_) {
      write_verdicts(summary, name, verdicts);
      ok = ok && all_passed(verdicts);
    }
    return ok;
  }

 private:
  std::vector<Verdict> sweep() {
    SweepResult r = run_flux_sweep(cfg_);
    auto csv = open_output(out_ / "sweep.csv");
    write_sweep_csv(csv, r);
    return r.verdicts;
  }
  std::vector<Verdict> circle() {
    CircleResult r = run_circle_check(cfg_);
    auto csv = open_output(out_ / "circle.csv");
    write_circle_csv(csv, r);
    return r.verdicts;
  }
  std::vector<Verdict> slit() {
    SlitResult r = run_slit_infimum(cfg_);
    auto csv = open_output(out_ / "slit.csv");
    write_slit_csv(csv, r);
    return r.verdicts;
  }
  std::vector<Verdict> multiplicity() {
    MultiplicityResult r = run_multiplicity_experiment(cfg_);
    if (r.perturbed_report) {
      auto svg = open_output(out_ / "multiplicity_bump.svg");
      write_svg(svg, build_grid(cfg_.domain), {r.perturbed_set});
    }
    return r.verdicts;
  }
  std::vector<Verdict> cover() {
    CoverResult r = run_cover_equivalence(cfg_);
    auto csv = open_output(out_ / "cover.csv");
    write_cover_csv(csv, r);
    return r.verdicts;
  }
  std::vector<Verdict> nodal() {
    NodalResult r = run_nodal_experiment(cfg_);
    const GridDomain grid = build_grid(cfg_.domain);
    std::vector<NodalSet> sets;
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      sets.push_back(r.entries[i].set);
      auto lines = open_output(out_ / ("nodal_" + std::to_string(i) + ".txt"));
      write_polylines(lines, r.entries[i].set);
    }
    auto svg = open_output(out_ / "nodal.svg");
    write_svg(svg, grid, sets);
    auto reports = open_output(out_ / "nodal_reports.jsonl");
    write_nodal_reports(reports, r);
    return r.verdicts;
  }

  ExperimentConfig cfg_;
  fs::path out_;
  std::vector<std::pair<std::string, std::vector<Verdict>>> all_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aharonov-Bohm ground states on lattice domains with holes"};
  app.require_subcommand(1);
  fs::path config;
  fs::path out = "runs";
  int refine = 0;

  const std::vector<std::string> names{"sweep", "circle", "slit", "multiplicity", "cover", "nodal", "all"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name, name == "all" ? "run every experiment" : "run the " + name + " experiment");
    sub->add_option("--config", config, "experiment config file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--grid-refine", refine, "refinement factor for two-grid studies (>= 2)");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (!fs::exists(config)) throw Error(ErrorCode::ConfigError, "config " + config.string() + " not found");
    ExperimentConfig cfg = load_config(config);
    if (refine != 0) {
      if (refine < 2) throw Error(ErrorCode::ConfigError, "--grid-refine must be at least 2");
      cfg.slit.refine = refine;
    }
    cfg.out_dir = out;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());

    Runner runner(cfg, out);
    const std::string chosen = app.get_subcommands().front()->get_name();
    if (chosen == "all") {
      const bool one_hole = cfg.domain.holes.size() == 1;
      for (const std::string name : {"circle", "sweep", "cover", "multiplicity", "nodal", "slit"}) {
        if (name == std::string("slit") && !one_hole) {
          std::cerr << "slit: skipped, the slit family needs exactly one hole\n";
          continue;
        }
        runner.run(name);
      }
    } else {
      runner.run(chosen);
    }
    return runner.finish() ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::InvalidSpec:
      case ErrorCode::SpecTooCoarse:
      case ErrorCode::DisconnectedDomain:
        return 2;
      default:
        return 1;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
