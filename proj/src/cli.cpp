#include "mqdecay/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqdecay/combinatorics.hpp"
#include "mqdecay/errors.hpp"
#include "mqdecay/fitting.hpp"
#include "mqdecay/io.hpp"
#include "mqdecay/model.hpp"
#include "mqdecay/oracle.hpp"
#include "mqdecay/rates.hpp"

namespace mqdecay::cli {

namespace {

template <typename T>
void optional_option(CLI::App* app, const std::string& name, std::optional<T>& target,
                     const std::string& help) {
  app->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void add_time_grid(CLI::App* app, RunConfig& cfg) {
  optional_option(app, "--t-max", cfg.t_max, "Last sample time in seconds (grid starts at 0)");
  app->add_option("--steps", cfg.steps, "Number of intervals in the time grid");
}

void add_model_params(CLI::App* app, RunConfig& cfg) {
  optional_option(app, "--n", cfg.n, "Cluster size");
  optional_option(app, "--p", cfg.p, "Degree of correlation in [0, 1]");
  optional_option(app, "--m2", cfg.M2, "Second moment M2 in s^-2");
  optional_option(app, "--alpha", cfg.alpha, "alpha = M2/9 in s^-2 (alternative to --m2)");
}

void add_output(CLI::App* app, RunConfig& cfg) {
  app->add_option("--output,-o", cfg.output_path, "Output file (default: stdout)");
}

void add_workers(CLI::App* app, RunConfig& cfg) {
  app->add_option("--workers", cfg.workers,
                  std::string("Worker threads (default: $") + kWorkersEnv +
                      " or hardware concurrency)");
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

ModelParams model_params(const RunConfig& cfg) {
  const double alpha = cfg.alpha ? *cfg.alpha : *cfg.M2 / 9.0;
  return ModelParams{static_cast<double>(*cfg.n), *cfg.p, alpha};
}

std::vector<double> time_grid(const RunConfig& cfg) {
  return uniform_time_grid(*cfg.t_max, cfg.steps);
}

void write_counts(const RunConfig& cfg, std::ostream& out) {
  const int n = *cfg.n;
  std::vector<int> orders = cfg.M;
  if (orders.empty()) {
    for (int M = 0; M <= n; ++M) orders.push_back(M);
  }
  out << "n,M,f,exact,asymptotic\n";
  for (int M : orders) {
    for (int f = std::abs(M); f <= n; f += 2) {
      if (cfg.f && *cfg.f != f) continue;
      const BigInt exact = config_count(n, M, f);
      const std::string asymptotic =
          f >= 1 ? io::format_number(config_count_asymptotic(n, M, f).value()) : "nan";
      out << n << ',' << M << ',' << f << ',' << exact << ',' << asymptotic << '\n';
    }
  }
}

void write_simulation(const RunConfig& cfg, std::ostream& out) {
  const std::vector<double> times = time_grid(cfg);
  const OracleOptions options{cfg.max_spins, cfg.workers};
  DecaySeries series;
  if (!cfg.bath.empty()) {
    const BathKind bath{cfg.bath == "correlated" ? BathCorrelation::Correlated
                                                 : BathCorrelation::Uncorrelated,
                        *cfg.gamma_alpha};
    series = exact_signal_bath(static_cast<std::size_t>(*cfg.n),
                               cfg.M.empty() ? 0 : cfg.M.front(), bath, times);
  } else {
    CouplingSet couplings;
    if (!cfg.couplings_path.empty()) {
      couplings = io::read_coupling_set_file(cfg.couplings_path);
    } else if (!cfg.geometry_path.empty()) {
      SpinGeometry geometry;
      geometry.positions = io::read_xyz_file(cfg.geometry_path);
      geometry.field_axis = cfg.field_axis;
      geometry.gyromagnetic_ratio = cfg.gamma;
      couplings = dipolar_couplings(geometry, cfg.units);
    } else if (cfg.synth == "constant") {
      couplings = synth_constant(static_cast<std::size_t>(*cfg.n), *cfg.b);
    } else {
      couplings = synth_random(static_cast<std::size_t>(*cfg.n), *cfg.magnitude,
                               cfg.zero_mean, cfg.seed);
    }
    series = cfg.M.empty() ? exact_signal_total(couplings, times, options)
                           : exact_signal_dipolar(couplings, cfg.M.front(), times, options);
  }
  io::write_series_csv(out, series);
}

void write_model(const RunConfig& cfg, std::ostream& out) {
  const ModelParams params = model_params(cfg);
  params.validate();
  const std::vector<double> times = time_grid(cfg);
  if (cfg.M.size() <= 1) {
    const DecaySeries series = cfg.M.empty() ? total_series(params, times)
                                             : composite_series(params, cfg.M.front(), times);
    io::write_series_csv(out, series);
    return;
  }
  out << 't';
  for (int M : cfg.M) out << ",S_M" << M;
  out << '\n';
  for (double t : times) {
    out << io::format_number(t);
    for (int M : cfg.M) out << ',' << io::format_number(s_m_composite(params, M, t));
    out << '\n';
  }
}

void write_rates(const RunConfig& cfg, std::ostream& out) {
  const RateCurve curve = rate_curve(model_params(cfg), cfg.M);
  out << "M,rate,status\n";
  for (std::size_t i = 0; i < curve.M_values.size(); ++i) {
    out << curve.M_values[i] << ',' << io::format_number(curve.rates[i]) << ','
        << to_string(curve.status[i]) << '\n';
  }
}

void write_scaling(const RunConfig& cfg, std::ostream& out) {
  const ModelParams base = [&] {
    RunConfig copy = cfg;
    copy.n = cfg.n_list.front();
    return model_params(copy);
  }();
  std::vector<ModelParams> list;
  for (int n : cfg.n_list) list.push_back({static_cast<double>(n), base.p, base.alpha});
  const std::optional<int> order =
      cfg.M.empty() ? std::nullopt : std::optional<int>(cfg.M.front());
  const ScalingResult result = scaling_exponent(list, order);
  for (double n : result.excluded_n) {
    std::cerr << "warning: n=" << io::format_number(n)
              << " has no 1/e crossing and was excluded\n";
  }
  out << "n,rate,exponent\n";
  for (std::size_t i = 0; i < result.n_values.size(); ++i) {
    out << io::format_number(result.n_values[i]) << ',' << io::format_number(result.rates[i])
        << ',' << io::format_number(result.exponent) << '\n';
  }
}

void write_fit(const RunConfig& cfg, std::ostream& out) {
  const std::vector<RatePoint> points = io::read_rate_csv_file(cfg.input_path);
  FitOptions options;
  options.workers = cfg.workers;
  const std::vector<FitResult> fits = fit_all(points, options);
  nlohmann::json doc = nlohmann::json::parse(io::fit_results_to_json(fits));
  if (cfg.pool_m2) {
    const PooledMoment pooled = pool_second_moment(fits);
    for (auto& item : doc) {
      item["M2_pooled"] = pooled.mean;
      item["M2_pooled_sd"] = pooled.sd;
    }
  }
  out << doc.dump(2) << '\n';
}

std::size_t workers_from_env() {
  const char* value = std::getenv(kWorkersEnv);
  if (value == nullptr || *value == '\0') return 0;
  try {
    const long parsed = std::stol(value);
    if (parsed < 0) throw UsageError("");
    return static_cast<std::size_t>(parsed);
  } catch (...) {
    throw UsageError(std::string(kWorkersEnv) + " must be a nonnegative integer");
  }
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  bool workers_given = false;

  CLI::App app{"Collective dephasing of multiple-quantum spin coherences"};
  app.name("mqdecay");
  app.set_config("--config", "", "Read options from a TOML/INI file; flags take precedence");
  app.require_subcommand(1);

  auto* counts = app.add_subcommand("counts", "Exact and asymptotic configuration counts (CSV)");
  optional_option(counts, "--n", cfg.n, "Cluster size");
  counts->add_option("--M", cfg.M, "Coherence orders (default: 0..n)");
  optional_option(counts, "--f", cfg.f, "Restrict to one Hamming distance");
  add_output(counts, cfg);

  auto* simulate = app.add_subcommand("simulate", "Exact oracle signal for a small cluster (CSV t,S)");
  simulate->add_option("--couplings", cfg.couplings_path, "CouplingSet JSON file");
  simulate->add_option("--geometry", cfg.geometry_path, "XYZ geometry file (meters)");
  simulate->add_option("--synth", cfg.synth, "Synthetic couplings")
      ->check(CLI::IsMember({"constant", "random"}));
  simulate->add_option("--bath", cfg.bath, "External bath instead of dipolar couplings")
      ->check(CLI::IsMember({"uncorrelated", "correlated"}));
  optional_option(simulate, "--gamma-alpha", cfg.gamma_alpha, "Bath Gamma(t)/t^2 in s^-2");
  optional_option(simulate, "--n", cfg.n, "Cluster size for synthetic couplings or bath");
  optional_option(simulate, "--b", cfg.b, "Constant coupling in rad/s");
  optional_option(simulate, "--magnitude", cfg.magnitude, "Random coupling magnitude in rad/s");
  simulate->add_flag("--zero-mean", cfg.zero_mean, "Draw random couplings symmetric about 0");
  simulate->add_option("--seed", cfg.seed, "Random seed");
  simulate->add_option_function<std::vector<double>>(
               "--field-axis",
               [&cfg](const std::vector<double>& v) { cfg.field_axis = {v[0], v[1], v[2]}; },
               "Unit field direction x y z")
      ->expected(3);
  simulate->add_option("--gamma", cfg.gamma, "Gyromagnetic ratio in rad/(s T)");
  simulate->add_option_function<std::string>(
      "--units", [&cfg](const std::string& v) { cfg.units = parse_units(v); },
      "SI (default) or Gaussian");
  simulate->add_option("--M", cfg.M, "Coherence order (default: total signal)");
  simulate->add_option("--max-spins", cfg.max_spins, "Oracle spin cap");
  add_time_grid(simulate, cfg);
  add_workers(simulate, cfg);
  add_output(simulate, cfg);

  auto* model = app.add_subcommand("model", "Closed-form composite or total signal (CSV)");
  add_model_params(model, cfg);
  model->add_option("--M", cfg.M, "Coherence orders (default: total signal)");
  add_time_grid(model, cfg);
  add_output(model, cfg);

  auto* rates = app.add_subcommand("rates", "Decoherence rate per coherence order (CSV)");
  add_model_params(rates, cfg);
  rates->add_option("--M", cfg.M, "Coherence orders");
  add_output(rates, cfg);

  auto* scaling = app.add_subcommand("scaling", "Rate versus cluster size and log-log slope (CSV)");
  scaling->add_option("--n", cfg.n_list, "Cluster sizes (at least three)");
  optional_option(scaling, "--p", cfg.p, "Degree of correlation in [0, 1]");
  optional_option(scaling, "--m2", cfg.M2, "Second moment M2 in s^-2");
  optional_option(scaling, "--alpha", cfg.alpha, "alpha = M2/9 in s^-2");
  scaling->add_option("--M", cfg.M, "Fixed coherence order (default: total signal)");
  add_output(scaling, cfg);

  auto* fit = app.add_subcommand("fit", "Weighted least-squares fit of (p, M2) per cluster size");
  fit->add_option("--input", cfg.input_path, "Rate CSV: n,M,rate_per_s,sigma_per_s");
  fit->add_flag("--pool-m2", cfg.pool_m2, "Add the pooled M2 mean and sd to every entry");
  add_workers(fit, cfg);
  add_output(fit, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const std::map<CLI::App*, Subcommand> kinds{
      {counts, Subcommand::Counts}, {simulate, Subcommand::Simulate},
      {model, Subcommand::Model},   {rates, Subcommand::Rates},
      {scaling, Subcommand::Scaling}, {fit, Subcommand::Fit}};
  for (const auto& [sub, kind] : kinds) {
    if (sub->parsed()) cfg.subcommand = kind;
  }
  for (auto* sub : {simulate, fit}) {
    if (sub->parsed() && sub->count("--workers") > 0) workers_given = true;
  }
  if (!workers_given) cfg.workers = workers_from_env();
  return validate_config(std::move(cfg));
}

RunConfig validate_config(RunConfig cfg) {
  auto require_model = [&](bool need_n) {
    if (need_n) require(cfg.n.has_value(), "--n is required");
    require(cfg.p.has_value(), "--p is required");
    require(*cfg.p >= 0.0 && *cfg.p <= 1.0, "--p must lie in [0, 1]");
    require(cfg.M2.has_value() != cfg.alpha.has_value(),
            "exactly one of --m2 and --alpha is required");
    if (cfg.M2) require(*cfg.M2 > 0.0, "--m2 must be positive");
    if (cfg.alpha) require(*cfg.alpha > 0.0, "--alpha must be positive");
    if (need_n) require(*cfg.n >= 1, "--n must be at least 1");
  };
  auto require_grid = [&] {
    require(cfg.t_max.has_value(), "--t-max is required");
    require(*cfg.t_max > 0.0, "--t-max must be positive");
    require(cfg.steps >= 1, "--steps must be at least 1");
  };
  auto require_orders_within = [&](int n) {
    for (int M : cfg.M) {
      require(std::abs(M) <= n, "coherence order " + std::to_string(M) + " exceeds n");
    }
  };

  switch (cfg.subcommand) {
    case Subcommand::Counts:
      require(cfg.n.has_value(), "--n is required");
      require(*cfg.n >= 1, "--n must be at least 1");
      require_orders_within(*cfg.n);
      if (cfg.f) require(*cfg.f >= 0 && *cfg.f <= *cfg.n, "--f must lie in [0, n]");
      break;
    case Subcommand::Simulate: {
      const int sources = !cfg.couplings_path.empty() + !cfg.geometry_path.empty() +
                          !cfg.synth.empty() + !cfg.bath.empty();
      require(sources == 1,
              "choose exactly one of --couplings, --geometry, --synth and --bath");
      require(cfg.M.size() <= 1, "simulate takes a single --M");
      if (!cfg.synth.empty() || !cfg.bath.empty()) {
        require(cfg.n.has_value(), "--n is required");
        require(*cfg.n >= 2 || !cfg.bath.empty(), "--n must be at least 2");
        require(*cfg.n >= 1, "--n must be at least 1");
        require_orders_within(*cfg.n);
      }
      if (cfg.synth == "constant") require(cfg.b.has_value(), "--b is required");
      if (cfg.synth == "random") {
        require(cfg.magnitude.has_value(), "--magnitude is required");
        require(*cfg.magnitude > 0.0, "--magnitude must be positive");
      }
      if (!cfg.bath.empty()) {
        require(cfg.gamma_alpha.has_value(), "--gamma-alpha is required");
        require(*cfg.gamma_alpha >= 0.0, "--gamma-alpha must be nonnegative");
      }
      if (!cfg.bath.empty() && cfg.M.empty()) cfg.M.push_back(0);
      require(cfg.max_spins >= 2, "--max-spins must be at least 2");
      require_grid();
      break;
    }
    case Subcommand::Model:
      require_model(true);
      require_orders_within(*cfg.n);
      require_grid();
      break;
    case Subcommand::Rates:
      require_model(true);
      require(!cfg.M.empty(), "--M is required");
      require_orders_within(*cfg.n);
      break;
    case Subcommand::Scaling: {
      require_model(false);
      const std::set<int> distinct(cfg.n_list.begin(), cfg.n_list.end());
      require(distinct.size() >= 3, "--n needs at least three distinct sizes");
      require(*distinct.begin() >= 1, "cluster sizes must be at least 1");
      require(cfg.M.size() <= 1, "scaling takes a single --M");
      require_orders_within(*distinct.begin());
      break;
    }
    case Subcommand::Fit:
      require(!cfg.input_path.empty(), "--input is required");
      break;
  }
  return cfg;
}

void execute(const RunConfig& cfg, std::ostream& out) {
  // Buffer so a failing run leaves no partial output behind.
  std::ostringstream buffer;
  switch (cfg.subcommand) {
    case Subcommand::Counts:
      write_counts(cfg, buffer);
      break;
    case Subcommand::Simulate:
      write_simulation(cfg, buffer);
      break;
    case Subcommand::Model:
      write_model(cfg, buffer);
      break;
    case Subcommand::Rates:
      write_rates(cfg, buffer);
      break;
    case Subcommand::Scaling:
      write_scaling(cfg, buffer);
      break;
    case Subcommand::Fit:
      write_fit(cfg, buffer);
      break;
  }
  if (cfg.output_path.empty()) {
    out << buffer.str();
    out.flush();
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + cfg.output_path + "'");
  file << buffer.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> cfg = parse_args(argc, argv, out);
    if (!cfg) return kExitOk;
    execute(*cfg, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace mqdecay::cli
