// randcrit command-line front end. Every subcommand writes its artifacts
// into --out, each prefixed by the config hash, plus summary.json.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "randcrit/ensembles.hpp"
#include "randcrit/io.hpp"
#include "randcrit/kacrice.hpp"
#include "randcrit/montecarlo.hpp"
#include "randcrit/parallel.hpp"
#include "randcrit/special_geometry.hpp"
#include "randcrit/vacua.hpp"

namespace fs = std::filesystem;
using namespace randcrit;
using cli::ExperimentConfig;
using ojson = nlohmann::ordered_json;

namespace {

// Artifacts go to "<name>.tmp" and are renamed only once everything has
// been written; any failure removes what this run produced.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}
  ~Outputs() {
    if (!committed_) discard();
  }

  std::ofstream& open(const std::string& name) {
    fs::create_directories(dir_);
    files_.push_back({name, std::make_unique<std::ofstream>(tmp(name), std::ios::binary)});
    if (!*files_.back().stream) throw Error(ErrorCode::Io, "cannot write " + tmp(name).string());
    return *files_.back().stream;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& f : files_) out.push_back(f.name);
    return out;
  }

  void commit() {
    for (auto& f : files_) {
      f.stream->close();
      if (!*f.stream) throw Error(ErrorCode::Io, "failed writing " + f.name);
      if (fs::file_size(tmp(f.name)) == 0) throw Error(ErrorCode::Io, "empty artifact " + f.name);
    }
    for (auto& f : files_) fs::rename(tmp(f.name), dir_ / f.name);
    committed_ = true;
  }

  void discard() {
    std::error_code ec;
    for (auto& f : files_) {
      f.stream->close();
      fs::remove(tmp(f.name), ec);
      fs::remove(dir_ / f.name, ec);
    }
  }

 private:
  fs::path tmp(const std::string& name) const { return dir_ / (name + ".tmp"); }

  struct File {
    std::string name;
    std::unique_ptr<std::ofstream> stream;
  };
  fs::path dir_;
  std::vector<File> files_;
  bool committed_ = false;
};

struct Run {
  const ExperimentConfig& cfg;
  std::string hash;
  Outputs& out;
  ojson results;
  int threads;

  std::ofstream& csv(const std::string& name) {
    auto& s = out.open(name);
    s << "# config_hash=" << hash << '\n';
    return s;
  }
  void json(const std::string& name, ojson j) {
    ojson wrapped;
    wrapped["config_hash"] = hash;
    for (auto& [k, v] : j.items()) wrapped[k] = v;
    out.open(name) << wrapped.dump(2) << '\n';
  }
};

Region region_of(const ExperimentConfig& c) { return Region{c.x0, c.x1, c.y0, c.y1}; }

ojson report_json(const CountReport& r) { return ojson::parse(to_json(r)); }

void run_density(Run& run) {
  const auto& c = run.cfg;
  const auto e = build_ensemble(parse_ensemble(c.ensemble), c.degrees[0]);
  const auto grid = square_grid(c.grid_min, c.grid_max, c.grid_n);
  const auto d = density_grid(e, grid, run.threads);
  write_csv(run.csv("density.csv"), d);
  run.results["total_mass_in_window"] = d.total_mass();
  run.results["density_at_origin"] = complex_zero_density(e, 0.0);
}

void run_zeros_mc(Run& run) {
  const auto& c = run.cfg;
  const auto e = build_ensemble(parse_ensemble(c.ensemble), c.degrees[0]);
  const auto grid = square_grid(c.grid_min, c.grid_max, c.grid_n);
  const auto d = empirical_zero_density(e, c.samples, grid, c.seed, run.threads);
  write_csv(run.csv("zeros_mc.csv"), d);
  run.results["overflow"] = d.overflow;
  run.results["n_samples"] = d.n_samples;
  run.results["max_residual_ratio"] = d.max_residual_ratio;
}

void run_real_zeros(Run& run) {
  const auto& c = run.cfg;
  auto& s = run.csv("real_zeros.csv");
  s << "N,mc_mean,mc_stderr,quadrature,asymptotic\n";
  RealZeroOptions opts;
  opts.threads = run.threads;
  for (int n : c.degrees) {
    const auto mc = empirical_real_zero_count(n, c.samples, c.seed, opts);
    const double q = expected_real_zeros(n);
    s << n << ',' << format_number(mc.mean) << ',' << format_number(mc.stderr_) << ','
      << format_number(q) << ',' << format_number(2.0 / kPi * std::log(n)) << '\n';
  }
}

void run_attractors(Run& run) {
  const auto& c = run.cfg;
  const auto m = PeriodModel::cubic(c.kappa);
  AttractorOptions opts;
  opts.start_grid = c.start_grid;
  opts.threads = run.threads;
  opts.discriminant_prefilter = c.prefilter;
  const auto res = enumerate_attractor_points(m, region_of(c), c.zmax, c.box, opts);
  write_records_csv(run.csv("attractors.csv"), m, res.records);
  ojson rep = report_json(res.report);
  rep["continuum_count"] = attractor_continuum_count(m, region_of(c), c.zmax);
  run.json("count_report.json", rep);
  run.results["count"] = res.report.count;
  run.results["prediction"] = res.report.prediction;
}

void run_flux_vacua(Run& run) {
  const auto& c = run.cfg;
  const auto m = PeriodModel::rigid();
  FluxOptions opts;
  opts.threads = run.threads;
  opts.flux_sign = c.flux_sign;
  const auto res = enumerate_flux_vacua(m, region_of(c), c.lmax, c.box, opts);
  write_records_csv(run.csv("flux_vacua.csv"), m, res.records);
  run.json("count_report.json", report_json(res.report));
  run.results["count"] = res.report.count;
  run.results["signed_index"] = res.report.signed_index;
  run.results["prediction"] = res.report.prediction;
  if (res.w2.size() >= 100) {
    const auto w = w2_statistics(res.w2, c.bins);
    auto& h = run.csv("w2_histogram.csv");
    h << "lo,hi,count\n";
    for (std::size_t b = 0; b < w.counts.size(); ++b)
      h << format_number(w.edges[b]) << ',' << format_number(w.edges[b + 1]) << ','
        << w.counts[b] << '\n';
    run.json("w2_stats.json", {{"n_total", w.n_total},
                               {"n_lower", w.n_lower},
                               {"q", w.q},
                               {"ks_distance", w.ks_distance},
                               {"ks_pvalue", w.ks_pvalue},
                               {"uniform_at_1pct", w.uniform_at_1pct}});
  } else {
    run.results["w2"] = "fewer than 100 vacua; no statistics";
  }
}

void run_flux_continuum(Run& run) {
  const auto& c = run.cfg;
  const auto m = PeriodModel::rigid();
  const Region r = region_of(c);
  double radius = c.box_radius;
  if (radius == 0.0) {
    // smallest box that contains the admissible set
    radius = continuum_flux_count(m, r, c.lmax, 1, c.seed, 1.0, 1).required_radius;
    if (radius == 0.0) radius = 1.0;
  }
  const auto est = continuum_flux_count(m, r, c.lmax, c.samples, c.seed, radius, run.threads);
  auto& s = run.csv("flux_continuum.csv");
  s << "lmax,estimate,stderr,hits,n_samples,box_radius,required_radius,contained\n";
  s << c.lmax << ',' << format_number(est.estimate) << ',' << format_number(est.stderr_) << ','
    << est.hits << ',' << est.n_samples << ',' << format_number(est.box_radius) << ','
    << format_number(est.required_radius) << ',' << (est.contained ? 1 : 0) << '\n';
  run.results["estimate"] = est.estimate;
  run.results["stderr"] = est.stderr_;
  run.results["contained"] = est.contained;
}

void run_report(Run& run) {
  const auto& c = run.cfg;
  const Region r = region_of(c);
  ojson j;
  if (c.model == "cubic") {
    const auto m = PeriodModel::cubic(c.kappa);
    j["model"] = "cubic";
    j["kappa"] = c.kappa;
    j["volume"] = metric_and_volume(m, r).volume;
    j["zmax"] = c.zmax;
    j["attractor_prediction"] = attractor_count_prediction(m, r, c.zmax);
    j["attractor_continuum_count"] = attractor_continuum_count(m, r, c.zmax);
  } else if (c.model == "rigid") {
    const auto m = PeriodModel::rigid();
    j["model"] = "rigid";
    j["volume"] = metric_and_volume(m, r).volume;
    j["curvature_integral"] = integrated_curvature_density(m, r);
    j["lmax"] = c.lmax;
    j["flux_index_prediction"] = flux_index_prediction(m, r, c.lmax);
  } else {
    throw Error(ErrorCode::InvalidConfig, "report model must be cubic or rigid");
  }
  ojson real = ojson::array();
  for (int n : c.degrees)
    real.push_back({{"N", n},
                    {"expected_real_zeros", expected_real_zeros(n)},
                    {"asymptotic", 2.0 / kPi * std::log(n)}});
  j["real_zeros"] = real;
  run.json("report.json", j);
}

void apply_command_defaults(ExperimentConfig& c) {
  if (c.command == "flux-vacua" || c.command == "flux-continuum") {
    c.model = "rigid";
    c.y0 = 1.0;
    c.y1 = 2.0;
    c.box = 40;
    c.samples = 1000000;
  }
  if (c.command == "attractors") c.box = 30;
  if (c.command == "real-zeros") c.degrees = {2, 10, 50};
}

int fail(ErrorCode code, const std::string& message) {
  ojson e;
  e["error"] = {{"code", error_code_name(code)}, {"message", message}};
  std::cerr << e.dump() << std::endl;
  const bool config_level = code == ErrorCode::InvalidConfig || code == ErrorCode::DomainError ||
                            code == ErrorCode::Overflow || code == ErrorCode::InvalidDegree;
  return config_level ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random polynomials, Kac-Rice densities, attractor and flux vacuum censuses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(RANDCRIT_VERSION));

  struct Flags {
    std::string ensemble, grid, region, config, out, model;
    std::vector<int> degrees;
    double kappa = 0, zmax = 0, box_radius = 0;
    long long lmax = 0, samples = 0;
    int box = 0, start_grid = 0, bins = 0, threads = 0;
    std::uint64_t seed = 0;
    bool no_prefilter = false, flip_h = false;
  } f;
  // (key, option) for every subcommand; only the parsed subcommand's
  // options can have a nonzero count
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  auto add = [&](const std::string& key, CLI::Option* o) { opts.push_back({key, o}); };

  auto common = [&](CLI::App* s) {
    add("seed", s->add_option("--seed", f.seed, "RNG seed"));
    add("threads", s->add_option("--threads", f.threads, "worker threads (results do not depend on it)"));
    add("out", s->add_option("--out", f.out, "output directory"));
    add("config", s->add_option("--config", f.config, "JSON config file; flags override it"));
  };
  auto degrees = [&](CLI::App* s) {
    add("degrees", s->add_option("-N,--degree", f.degrees, "polynomial degree(s)")->delimiter(','));
  };
  auto ensemble = [&](CLI::App* s) {
    add("ensemble", s->add_option("--ensemble", f.ensemble, "kac | kostlan"));
    degrees(s);
    add("grid", s->add_option("--grid", f.grid, "square grid lo:hi:bins"));
  };
  auto region = [&](CLI::App* s) { add("region", s->add_option("--region", f.region, "x0:x1:y0:y1")); };

  auto* density = app.add_subcommand("density", "analytic zero density on a grid");
  common(density);
  ensemble(density);

  auto* zeros = app.add_subcommand("zeros-mc", "Monte Carlo zero histogram");
  common(zeros);
  ensemble(zeros);
  add("samples", zeros->add_option("--samples", f.samples, "number of samples"));

  auto* real = app.add_subcommand("real-zeros", "expected real zeros, quadrature and Monte Carlo");
  common(real);
  degrees(real);
  add("samples", real->add_option("--samples", f.samples, "samples per degree"));

  auto* attr = app.add_subcommand("attractors", "attractor census on the cubic model");
  common(attr);
  region(attr);
  add("kappa", attr->add_option("--kappa", f.kappa, "cubic coupling"));
  add("zmax", attr->add_option("--zmax", f.zmax, "bound on |Z|"));
  add("box", attr->add_option("--box", f.box, "charge box B"));
  add("start_grid", attr->add_option("--start-grid", f.start_grid, "flow starts per axis"));
  add("no_prefilter", attr->add_flag("--no-prefilter", f.no_prefilter, "flow every charge"));

  auto* flux = app.add_subcommand("flux-vacua", "flux vacuum census on the rigid model");
  common(flux);
  region(flux);
  add("lmax", flux->add_option("--lmax", f.lmax, "bound on L"));
  add("box", flux->add_option("--box", f.box, "flux box B"));
  add("bins", flux->add_option("--bins", f.bins, "|W|^2 histogram bins"));
  add("flip_h", flux->add_flag("--flip-h", f.flip_h, "use W = (f - tau h)^T eta Pi"));

  auto* cont = app.add_subcommand("flux-continuum", "continuum flux-volume estimate");
  common(cont);
  region(cont);
  add("lmax", cont->add_option("--lmax", f.lmax, "bound on L"));
  add("samples", cont->add_option("--samples", f.samples, "number of samples"));
  add("box_radius", cont->add_option("--box-radius", f.box_radius, "sampling box half-width"));

  auto* rep = app.add_subcommand("report", "analytic predictions only");
  common(rep);
  region(rep);
  degrees(rep);
  add("model", rep->add_option("--model", f.model, "cubic | rigid"));
  add("kappa", rep->add_option("--kappa", f.kappa, "cubic coupling"));
  add("zmax", rep->add_option("--zmax", f.zmax, "bound on |Z|"));
  add("lmax", rep->add_option("--lmax", f.lmax, "bound on L"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(ErrorCode::InvalidConfig, e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const std::string& key) {
    for (auto& [k, o] : opts)
      if (k == key && o->count() > 0) return true;
    return false;
  };

  const auto t0 = std::chrono::steady_clock::now();
  try {
    ExperimentConfig c;
    c.command = sub->get_name();
    apply_command_defaults(c);
    if (given("config")) {
      c = cli::load_config(f.config);
      if (c.command.empty()) c.command = sub->get_name();
      if (c.command != sub->get_name())
        throw Error(ErrorCode::InvalidConfig,
                    "config is for '" + c.command + "', ran '" + sub->get_name() + "'");
    }
    if (given("seed")) c.seed = f.seed;
    if (given("threads")) c.threads = f.threads;
    if (given("out")) c.out = f.out;
    if (given("ensemble")) c.ensemble = f.ensemble;
    if (given("degrees")) c.degrees = f.degrees;
    if (given("grid")) cli::parse_grid(f.grid, c);
    if (given("region")) cli::parse_region(f.region, c);
    if (given("samples")) c.samples = f.samples;
    if (given("kappa")) c.kappa = f.kappa;
    if (given("zmax")) c.zmax = f.zmax;
    if (given("box")) c.box = f.box;
    if (given("start_grid")) c.start_grid = f.start_grid;
    if (given("no_prefilter")) c.prefilter = !f.no_prefilter;
    if (given("lmax")) c.lmax = f.lmax;
    if (given("bins")) c.bins = f.bins;
    if (given("flip_h")) c.flux_sign = f.flip_h ? -1 : 1;
    if (given("box_radius")) c.box_radius = f.box_radius;
    if (given("model")) c.model = f.model;
    cli::validate(c);

    Outputs out(c.out);
    Run run{c, cli::config_hash(c), out, ojson::object(), resolve_threads(c.threads)};
    const std::string& cmd = c.command;
    if (cmd == "density") run_density(run);
    else if (cmd == "zeros-mc") run_zeros_mc(run);
    else if (cmd == "real-zeros") run_real_zeros(run);
    else if (cmd == "attractors") run_attractors(run);
    else if (cmd == "flux-vacua") run_flux_vacua(run);
    else if (cmd == "flux-continuum") run_flux_continuum(run);
    else run_report(run);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ojson summary;
    summary["version"] = RANDCRIT_VERSION;
    summary["config_hash"] = run.hash;
    summary["config"] = cli::to_json(c);
    summary["outputs"] = out.names();
    summary["results"] = run.results;
    summary["threads_used"] = run.threads;
    summary["wall_time_s"] = wall;
    out.open("summary.json") << summary.dump(2) << '\n';
    out.commit();
    return 0;
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const std::exception& e) {
    return fail(ErrorCode::Io, e.what());
  }
}
