#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quint/quint.hpp"

namespace {

struct GlobalOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "table";
};

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw quint::IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void add_provenance(quint::Report& rep, const std::string& command,
                    const std::string& input_path) {
  rep.section("Provenance");
  rep.add_text("tool_version", quint::version);
  rep.add_text("command", command);
  rep.add_text("input", input_path);
  rep.add_text("input_digest", quint::detail::hex64(quint::detail::fnv1a64(
                                   read_file_bytes(input_path))));
}

void deliver(const quint::Report& rep, const GlobalOptions& opts) {
  rep.write(std::cout, quint::parse_report_format(opts.format));
  if (!opts.out_path.empty()) {
    std::ofstream out(opts.out_path);
    if (!out) throw quint::IoError("cannot write '" + opts.out_path + "'");
    rep.write_machine(out);
    if (!out) throw quint::IoError("failed writing '" + opts.out_path + "'");
  }
}

void add_cross_sections(quint::Report& rep, const quint::CrossSectionSet& s) {
  rep.section("Cross sections");
  const auto row = [&rep](const char* key, double sigma,
                          const std::optional<double>& err) {
    rep.add(key, sigma, "barn");
    if (err) rep.add(std::string(key) + "_err", *err, "barn");
  };
  row("sigma1", s.sigma1, s.err1);
  row("sigma2", s.sigma2, s.err2);
  row("sigma3", s.sigma3, s.err3);
  row("sigma12", s.sigma12, s.err12);
  row("sigma23", s.sigma23, s.err23);
  row("sigma31", s.sigma31, s.err31);
  if (s.sigma123) row("sigma123", *s.sigma123, s.err123);
}

void add_cosines(quint::Report& rep, const quint::CosineTriple& t) {
  rep.section("Interference cosines");
  rep.add("alpha", t.alpha);
  if (t.alpha_err) rep.add("alpha_err", *t.alpha_err);
  rep.add("beta", t.beta);
  if (t.beta_err) rep.add("beta_err", *t.beta_err);
  rep.add("gamma", t.gamma);
  if (t.gamma_err) rep.add("gamma_err", *t.gamma_err);
}

void add_verdict(quint::Report& rep, const quint::CosineTriple& t,
                 const std::optional<double>& tol) {
  const quint::TheoryVerdict verdict = quint::classify(t, tol);
  const quint::detail::Gram3 gram{t.alpha, t.beta, t.gamma};
  rep.section("Classification");
  rep.add("f_value", verdict.f_value);
  if (verdict.f_error) rep.add("f_error", *verdict.f_error);
  rep.add("gram_det", gram.det());
  rep.add("gram_min_eigenvalue", gram.min_eigenvalue());
  rep.add("tolerance", verdict.tolerance);
  rep.add_text("verdict", quint::to_string(verdict.cls));
}

quint::Amplitude read_amplitude(const quint::Config& cfg,
                                const std::string& prefix) {
  const double mag = cfg.get_double(prefix + "_magnitude_sqrt_barn");
  const quint::PureAxis axis =
      cfg.get_axis_or(prefix + "_axis", quint::axis_i);
  const double phase = cfg.opt_double(prefix + "_phase_deg").value_or(0.0) *
                       quint::units::deg_to_rad;
  return {mag, quint::exp_pure(axis, phase)};
}

void run_classify(const std::string& path, const GlobalOptions& opts) {
  const quint::CrossSectionSet set = quint::ingest_cross_sections(path);
  quint::Report rep("theory classification");
  add_provenance(rep, "classify", path);
  add_cross_sections(rep, set);
  const quint::CosineTriple t = quint::cosine_triple(set);
  add_cosines(rep, t);
  add_verdict(rep, t, opts.tol);
  if (set.sigma123) {
    const quint::TripleCrossSection tri = quint::triple_cross_section(set);
    rep.section("Triple coherence check");
    rep.add("sigma123_measured", *set.sigma123, "barn");
    rep.add("sigma123_predicted", tri.predicted, "barn");
    rep.add("sigma123_residual", *tri.residual, "barn");
  }
  deliver(rep, opts);
}

void run_simulate(const std::string& path, const std::string& csv_path,
                  const GlobalOptions& opts) {
  const quint::Config cfg = quint::Config::parse_file(path);
  quint::Report rep("simulated coherent cross sections");
  add_provenance(rep, "simulate", path);

  quint::CrossSectionSet set;
  if (!cfg.has("mixture_components")) {
    std::array<quint::Amplitude, 3> amps;
    rep.section("Scatterers");
    for (int n = 1; n <= 3; ++n) {
      const std::string prefix = "scatterer" + std::to_string(n);
      amps[static_cast<std::size_t>(n - 1)] = read_amplitude(cfg, prefix);
      const quint::Amplitude& a = amps[static_cast<std::size_t>(n - 1)];
      const quint::AxisAngle aa = quint::axis_angle(a.direction.q());
      rep.add(prefix + "_magnitude", a.magnitude, "sqrt(barn)");
      rep.add(prefix + "_phase", aa.angle, "rad");
      rep.add(prefix + "_axis_x", aa.axis.x);
      rep.add(prefix + "_axis_y", aa.axis.y);
      rep.add(prefix + "_axis_z", aa.axis.z);
    }
    cfg.reject_unknown_keys();
    set = quint::simulate_cross_sections(amps[0], amps[1], amps[2]);
    add_cross_sections(rep, set);
    const quint::CosineTriple t = quint::cosine_triple(set);
    add_cosines(rep, t);
    add_verdict(rep, t, opts.tol);
  } else {
    // Discrete ensemble of amplitude triples: cross sections average with
    // the component weights; cosines come from the averaged cross sections.
    const std::int64_t m_count = cfg.get_int("mixture_components");
    if (m_count < 1) throw quint::SchemaError("mixture_components must be >= 1");
    std::vector<double> weights;
    std::vector<std::array<quint::Amplitude, 3>> members;
    rep.section("Mixture");
    rep.add_int("components", m_count);
    for (std::int64_t m = 1; m <= m_count; ++m) {
      const std::string cp = "component" + std::to_string(m);
      weights.push_back(cfg.get_double(cp + "_weight"));
      std::array<quint::Amplitude, 3> amps;
      for (int n = 1; n <= 3; ++n)
        amps[static_cast<std::size_t>(n - 1)] =
            read_amplitude(cfg, cp + "_scatterer" + std::to_string(n));
      members.push_back(amps);
      rep.add(cp + "_weight", weights.back());
    }
    const bool spin_independent = cfg.get_bool("spin_independent", false);
    cfg.reject_unknown_keys();

    // Pair cosines through the ensemble-averaging path; full averaged set
    // (including the triple) by direct weighting for the echo and the CSV.
    const std::array<std::array<int, 2>, 3> pairs{{{2, 3}, {3, 1}, {1, 2}}};
    double cosines[3];
    for (std::size_t p = 0; p < 3; ++p) {
      std::vector<quint::EnsembleComponent> comps;
      comps.reserve(members.size());
      for (std::size_t m = 0; m < members.size(); ++m)
        comps.push_back({weights[m],
                         members[m][static_cast<std::size_t>(pairs[p][0] - 1)],
                         members[m][static_cast<std::size_t>(pairs[p][1] - 1)]});
      cosines[p] = quint::averaged_gamma(comps);
    }
    set = quint::CrossSectionSet{};
    double sigma123 = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const quint::CrossSectionSet one = quint::simulate_cross_sections(
          members[m][0], members[m][1], members[m][2]);
      const double w = weights[m];
      set.sigma1 += w * one.sigma1;
      set.sigma2 += w * one.sigma2;
      set.sigma3 += w * one.sigma3;
      set.sigma12 += w * one.sigma12;
      set.sigma23 += w * one.sigma23;
      set.sigma31 += w * one.sigma31;
      sigma123 += w * *one.sigma123;
    }
    set.sigma123 = sigma123;
    add_cross_sections(rep, set);
    quint::CosineTriple t;
    t.alpha = cosines[0];
    t.beta = cosines[1];
    t.gamma = cosines[2];
    add_cosines(rep, t);
    if (spin_independent) {
      add_verdict(rep, t, opts.tol);
    } else {
      rep.section("Classification");
      rep.add_text("verdict",
                   "SKIPPED: spin-averaged cosines do not discriminate "
                   "number systems; set spin_independent = true to assert "
                   "a common direction across components");
    }
  }

  if (!csv_path.empty()) {
    quint::emit_cross_sections(csv_path, set);
    rep.section("Output");
    rep.add_text("csv", csv_path);
  }
  deliver(rep, opts);
}

void run_neutron(const std::string& path, const GlobalOptions& opts) {
  const quint::Config cfg = quint::Config::parse_file(path);
  quint::Report rep("neutron slab optics");
  add_provenance(rep, "neutron", path);

  std::optional<double> k0;
  if (cfg.has("k0_inv_angstrom"))
    k0 = cfg.get_double("k0_inv_angstrom") *
         quint::units::inv_angstrom_to_inv_sqrt_barn;

  const auto read_angle = [&cfg](const std::string& deg_key,
                                 const std::string& rad_key) {
    if (cfg.has(deg_key))
      return cfg.get_double(deg_key) * quint::units::deg_to_rad;
    return cfg.get_double(rad_key);
  };

  if (cfg.has("k_inv_angstrom")) {
    quint::NuclearChannel ch;
    ch.k = cfg.get_double("k_inv_angstrom") *
           quint::units::inv_angstrom_to_inv_sqrt_barn;
    ch.delta = read_angle("delta_deg", "delta_rad");
    ch.eta = cfg.opt_double("eta").value_or(1.0);
    quint::validate(ch);
    const quint::Amplitude f = quint::forward_amplitude(ch);
    const quint::AxisAngle aa = quint::axis_angle(f.direction.q());
    const double sig_s = quint::scattering_xsec(ch);
    const double sig_a = quint::absorption_xsec(ch);
    rep.section("Forward scattering");
    rep.add("amplitude_magnitude", f.magnitude, "sqrt(barn)");
    rep.add("amplitude_phase", aa.angle, "rad");
    rep.add("scattering_xsec", sig_s, "barn");
    rep.add("absorption_xsec", sig_a, "barn");
    // total = (2pi/k) * 2 Im f, with Im read along the i axis
    rep.add("optical_theorem_residual",
            sig_s + sig_a - (4.0 * 3.141592653589793 / ch.k) * f.value().x,
            "barn");
  }

  const std::int64_t n_slabs = cfg.opt_int("slab_count").value_or(0);
  if (n_slabs < 0) throw quint::SchemaError("slab_count must be >= 0");
  std::vector<quint::SlabLayer> layers;
  if (n_slabs > 0) rep.section("Slabs");
  for (std::int64_t s = 1; s <= n_slabs; ++s) {
    const std::string prefix = "slab" + std::to_string(s);
    const quint::PureAxis axis =
        cfg.get_axis_or(prefix + "_axis", quint::axis_i);
    const double transmission =
        cfg.opt_double(prefix + "_transmission").value_or(1.0);
    quint::SlabLayer layer;
    if (cfg.has(prefix + "_optical_deg") || cfg.has(prefix + "_optical_rad")) {
      quint::SlabPhase phase;
      phase.optical =
          read_angle(prefix + "_optical_deg", prefix + "_optical_rad");
      phase.attenuation =
          cfg.opt_double(prefix + "_attenuation").value_or(0.0);
      phase.axis = axis;
      layer = {phase, transmission};
    } else {
      if (!k0)
        throw quint::SchemaError("material slab '" + prefix +
                                 "' needs k0_inv_angstrom");
      quint::SlabSpec spec;
      spec.channel.k = *k0;
      spec.channel.delta = read_angle(prefix + "_delta_deg",
                                      prefix + "_delta_rad");
      spec.channel.eta = cfg.opt_double(prefix + "_eta").value_or(1.0);
      quint::validate(spec.channel);
      spec.number_density = cfg.get_double(prefix + "_n_per_cm3") *
                            quint::units::per_cm3_to_per_barn32;
      spec.thickness = cfg.get_double(prefix + "_thickness_cm") *
                       quint::units::cm_to_sqrt_barn;
      spec.axis = axis;
      spec.transmission = transmission;
      layer = {quint::slab_phase(spec), transmission};
    }
    layers.push_back(layer);
    rep.add(prefix + "_optical", layer.phase.optical, "rad");
    rep.add(prefix + "_optical",
            layer.phase.optical / quint::units::deg_to_rad, "deg");
    rep.add(prefix + "_attenuation", layer.phase.attenuation);
    rep.add(prefix + "_transmission", layer.transmission);
  }

  const bool want_spectrum = cfg.has("spectrum_spread_rel");
  quint::SpectralModel spectrum;
  if (want_spectrum) {
    if (!k0)
      throw quint::SchemaError("spectral averaging needs k0_inv_angstrom");
    spectrum.mean_k = *k0;
    spectrum.rel_spread = cfg.get_double("spectrum_spread_rel");
    spectrum.nodes =
        static_cast<int>(cfg.opt_int("spectrum_nodes").value_or(129));
  }
  cfg.reject_unknown_keys();

  if (!layers.empty()) {
    const quint::Quaternion q = quint::compose_slabs(layers);
    const quint::AxisAngle aa = quint::axis_angle(q);
    rep.section("Composed beamline");
    rep.add("net_magnitude", quint::norm(q));
    rep.add("net_phase", aa.angle, "rad");
    rep.add("net_phase", aa.angle / quint::units::deg_to_rad, "deg");
    rep.add("net_axis_x", aa.axis.x);
    rep.add("net_axis_y", aa.axis.y);
    rep.add("net_axis_z", aa.axis.z);
    if (layers.size() == 2)
      rep.add("order_discrepancy",
              quint::order_discrepancy(layers[0], layers[1]), "rad");
    if (want_spectrum) {
      const quint::FringeResult fr = quint::fringe_visibility(layers, spectrum);
      rep.section("Fringe visibility");
      rep.add("visibility", fr.visibility);
      rep.add("phase", fr.phase, "rad");
      rep.add("phase", fr.phase / quint::units::deg_to_rad, "deg");
    }
  } else if (want_spectrum) {
    throw quint::SchemaError("spectral averaging needs at least one slab");
  }
  deliver(rep, opts);
}

void run_fit(const std::string& path, const GlobalOptions& opts) {
  const quint::CrossSectionSet set = quint::ingest_cross_sections(path);
  const quint::FitResult fit = quint::fit_amplitudes(set);
  quint::Report rep("amplitude fit");
  add_provenance(rep, "fit", path);
  add_cross_sections(rep, set);
  rep.section("Fitted amplitudes");
  for (int n = 1; n <= 3; ++n) {
    const quint::Amplitude& a = fit.amplitudes[static_cast<std::size_t>(n - 1)];
    const std::string prefix = "scatterer" + std::to_string(n);
    const quint::Quaternion u = a.direction.q();
    rep.add(prefix + "_magnitude", a.magnitude, "sqrt(barn)");
    rep.add(prefix + "_dir_w", u.w);
    rep.add(prefix + "_dir_x", u.x);
    rep.add(prefix + "_dir_y", u.y);
    rep.add(prefix + "_dir_z", u.z);
  }
  rep.add("rms_residual", fit.rms_residual, "barn");
  rep.add_int("iterations", fit.iterations);
  if (set.sigma123) {
    rep.add("sigma123_measured", *set.sigma123, "barn");
    rep.add("sigma123_predicted",
            quint::combined_cross_section(fit.amplitudes), "barn");
  }
  add_cosines(rep, fit.cosines);
  add_verdict(rep, fit.cosines, opts.tol);
  deliver(rep, opts);
}

void run_mc(const std::string& path, const GlobalOptions& opts) {
  const quint::Config cfg = quint::Config::parse_file(path);
  quint::MonteCarloSpec spec;
  for (int n = 1; n <= 3; ++n)
    spec.truth[static_cast<std::size_t>(n - 1)] =
        read_amplitude(cfg, "scatterer" + std::to_string(n));
  spec.counts_per_barn = cfg.get_double("mc_counts_per_barn");
  spec.trials = cfg.get_int("mc_trials");
  const std::int64_t cfg_seed = cfg.opt_int("seed").value_or(0);
  spec.seed = opts.seed ? *opts.seed : static_cast<std::uint64_t>(cfg_seed);
  cfg.reject_unknown_keys();

  const quint::CosineTriple truth_cosines = quint::cosine_triple(
      quint::simulate_cross_sections(spec.truth[0], spec.truth[1],
                                     spec.truth[2], false));
  const quint::MonteCarloSummary sum = quint::run_monte_carlo(spec);

  quint::Report rep("counting-statistics study");
  add_provenance(rep, "mc", path);
  rep.section("Setup");
  rep.add("counts_per_barn", spec.counts_per_barn);
  rep.add_int("trials", spec.trials);
  rep.add_int("seed", static_cast<std::int64_t>(spec.seed));
  rep.add("true_f", quint::f_statistic(truth_cosines).value);
  rep.section("F statistic over trials");
  rep.add_int("trials_used", sum.trials_used);
  rep.add_int("trials_excluded", sum.trials_excluded);
  rep.add("mean_f", sum.mean_f);
  rep.add("stddev_f", sum.stddev_f);
  rep.add("stderr_f",
          sum.stddev_f / std::sqrt(static_cast<double>(sum.trials_used)));
  rep.add("q05", sum.q05);
  rep.add("q25", sum.q25);
  rep.add("median", sum.median);
  rep.add("q75", sum.q75);
  rep.add("q95", sum.q95);
  rep.add("fraction_f_above_1", sum.fraction_f_above_1);
  deliver(rep, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Coherent-interference toolkit: classify cross-section data by the "
      "pairwise-cosine test, simulate scatterer sets, model neutron slab "
      "phases, fit amplitudes, and study counting noise."};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions opts;
  double tol_value = 0.0;
  std::uint64_t seed_value = 0;
  CLI::Option* tol_opt =
      app.add_option("--tol", tol_value, "classification tolerance on F");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_value, "override the run seed");
  app.add_option("--out", opts.out_path,
                 "also write the report, machine form, to this file");
  app.add_option("--format", opts.format, "stdout rendering")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();

  std::string classify_path, simulate_path, neutron_path, fit_path, mc_path;
  std::string simulate_csv;

  CLI::App* classify =
      app.add_subcommand("classify", "classify a cross-section CSV file");
  classify->add_option("input", classify_path, "CSV file (id,sigma,err)")
      ->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "cross sections of configured scatterers");
  simulate->add_option("input", simulate_path, "run configuration file")
      ->required();
  simulate->add_option("--csv", simulate_csv,
                       "write the simulated set as CSV to this file");

  CLI::App* neutron = app.add_subcommand(
      "neutron", "slab phases, composition and fringe visibility");
  neutron->add_option("input", neutron_path, "run configuration file")
      ->required();

  CLI::App* fit =
      app.add_subcommand("fit", "fit amplitudes to a cross-section CSV file");
  fit->add_option("input", fit_path, "CSV file (id,sigma,err)")->required();

  CLI::App* mc = app.add_subcommand(
      "mc", "Poisson counting statistics of the F test");
  mc->add_option("input", mc_path, "run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (tol_opt->count() > 0) opts.tol = tol_value;
  if (seed_opt->count() > 0) opts.seed = seed_value;

  try {
    if (classify->parsed()) run_classify(classify_path, opts);
    if (simulate->parsed()) run_simulate(simulate_path, simulate_csv, opts);
    if (neutron->parsed()) run_neutron(neutron_path, opts);
    if (fit->parsed()) run_fit(fit_path, opts);
    if (mc->parsed()) run_mc(mc_path, opts);
  } catch (const quint::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const quint::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const quint::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const quint::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const quint::ValueError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const quint::DegenerateScatterer& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const quint::NotRealizable& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const quint::UnphysicalAbsorption& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const quint::DegenerateOperator& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
