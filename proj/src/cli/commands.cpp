#include <fstream>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "pns/cli.hpp"
#include "pns/errors.hpp"
#include "pns/kloosterman.hpp"

namespace pns::cli {

namespace {

struct Flags {
  long precision = 128;
  double radius = 1e-30;
  long max_precision = 1024;
  std::string out;
  std::string format = "csv";
  std::string route = "direct";
  double epsilon = 0.0;
  std::uint64_t ratio_to = 0;
  std::uint64_t n_max = 0;
  std::string config;
  unsigned jobs = 0;
  int theorem = 1;
  std::string k = "16";
  std::string N = "1";
};

std::string ball(const CertifiedReal& x) { return format_value(x) + " ± " + format_radius(x); }

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError(path, 0, "out", "cannot open for writing");
  return f;
}

int cmd_kloosterman(std::int64_t a, std::int64_t b, std::uint64_t c, const Flags& fl, std::ostream& out,
                    std::ostream& err) {
  using namespace pns::kloosterman;
  std::vector<KloostermanValue> values;
  if (fl.route == "direct" || fl.route == "both") values.push_back(kloosterman_direct(a, b, c, fl.precision));
  if (fl.route == "factored" || fl.route == "both") values.push_back(kloosterman_factored(a, b, c, fl.precision));
  if (fl.route == "auto") values.push_back(kloosterman::kloosterman(a, b, c, fl.precision));
  for (const auto& v : values) out << ball(v.value) << "  route=" << route_name(v.route) << '\n';
  if (values.size() == 2 && !values[0].value.overlaps(values[1].value)) {
    err << "error: direct and factored routes disagree\n";
    return 1;
  }
  return kExitOk;
}

int cmd_moment(std::int64_t m, std::uint64_t N, const Flags& fl, std::ostream& out) {
  out << ball(kloosterman::second_moment(m, N, fl.precision)) << '\n';
  return kExitOk;
}

int cmd_angles(std::uint64_t p, std::int64_t m, std::uint64_t I, const Flags& fl, std::ostream& out) {
  const auto sample = kloosterman::angle_sample(p, m, I, std::max(fl.precision, kMinPrecision));
  out << "sample size: " << sample.angles.size() << '\n';
  out << "KS distance: " << std::setprecision(6) << kloosterman::ks_distance(sample) << '\n';
  if (!fl.out.empty()) {
    auto f = open_output(fl.out);
    f << "n,theta\n" << std::setprecision(17);
    for (std::size_t i = 0; i < sample.angles.size(); ++i) f << sample.indices[i] << ',' << sample.angles[i] << '\n';
  } else if (sample.angles.size() <= 64) {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < sample.angles.size(); ++i) {
      out << "  n=" << sample.indices[i] << "  theta=" << sample.angles[i] << '\n';
    }
  }
  return kExitOk;
}

void print_coefficient(const poincare::CoefficientResult& r, std::ostream& out) {
  out << "value: " << ball(r.value) << '\n';
  out << "truncation C: " << r.truncation_C << '\n';
  out << "tail radius: " << r.tail_radius.to_string(3, MPFR_RNDU) << '\n';
  out << "sign: " << poincare::sign_name(r.sign) << '\n';
  out << "precision: " << r.precision << '\n';
}

poincare::CoefficientResult evaluate(const poincare::CoefficientQuery& q, const Flags& fl) {
  auto r = poincare::coefficient(q, fl.precision, fl.radius);
  if (r.sign == poincare::Sign::undetermined && fl.max_precision > fl.precision) {
    try {
      r = poincare::certify_nonzero(q, fl.max_precision, fl.precision);
    } catch (const RangeError&) {
      // escalation out of reach; keep the undetermined enclosure
    }
  }
  return r;
}

int cmd_coeff(unsigned k, std::uint64_t m, std::uint64_t N, std::uint64_t n, const Flags& fl, std::ostream& out) {
  const auto q = poincare::CoefficientQuery::make(k, m, N, n);
  const auto r = evaluate(q, fl);
  print_coefficient(r, out);
  if (fl.ratio_to != 0) {
    const auto base = evaluate(q.with_n(fl.ratio_to), fl);
    if (base.value.contains_zero()) {
      out << "ratio: undetermined (p(m; " << fl.ratio_to << ") not separated from 0)\n";
      return kExitUndetermined;
    }
    out << "ratio: " << ball(r.value / base.value) << '\n';
  }
  return r.sign == poincare::Sign::undetermined ? kExitUndetermined : kExitOk;
}

int cmd_vanishing(unsigned k, std::uint64_t m, std::uint64_t N, const Flags& fl, std::ostream& out) {
  poincare::CoefficientQuery::make(k, m, N, 1);
  poincare::VanishingReport rep;
  if (fl.epsilon > 0.0) {
    rep = poincare::verify_vanishing_bound(k, m, N, fl.epsilon, fl.max_precision);
    out << "window: " << poincare::vanishing_window(N, fl.epsilon) << '\n';
  } else {
    const std::uint64_t n_max = fl.n_max != 0 ? fl.n_max : 2 * N;
    rep = poincare::order_of_vanishing(k, m, N, n_max, fl.max_precision, fl.precision);
  }
  out << "scanned to: " << rep.scanned_to << '\n';
  if (rep.first_nonzero_n) {
    out << "first nonzero n: " << *rep.first_nonzero_n << '\n';
    out << "v_inf <= " << *rep.v_infinity_upper << '\n';
    out << "coefficient: " << ball(rep.witness->value) << "  sign=" << poincare::sign_name(rep.witness->sign) << '\n';
  } else {
    out << "first nonzero n: none certified\n";
  }
  out << "undetermined indices:";
  for (const auto n : rep.undetermined_indices) out << ' ' << n;
  out << "\nprecision used: " << rep.precision_used << '\n';
  return rep.first_nonzero_n ? kExitOk : kExitUndetermined;
}

int cmd_tau(std::uint64_t n_max, std::ostream& out) {
  const auto tau = poincare::tau_oracle(n_max);
  out << "n,tau\n";
  for (std::size_t i = 0; i < tau.size(); ++i) out << i + 1 << ',' << arith::to_string(tau[i]) << '\n';
  return kExitOk;
}

int cmd_verify(const CLI::App& sub, const CLI::App& app, const Flags& fl, std::ostream& out, std::ostream& err) {
  SweepConfig cfg;
  if (!fl.config.empty()) load_config(cfg, fl.config);
  auto given = [&](const char* name) {
    for (const CLI::App* a : {&sub, &app}) {
      if (const auto* opt = a->get_option_no_throw(name); opt != nullptr && opt->count() > 0) return true;
    }
    return false;
  };
  auto flag_error = [](const char* field, const std::string& msg) { return ConfigError("flags", 0, field, msg); };
  try {
    if (given("--theorem")) cfg.theorem_id = fl.theorem;
    if (given("--k")) cfg.k_range = parse_k_range(fl.k);
    if (given("--N")) cfg.N_list = parse_n_list(fl.N);
  } catch (const std::invalid_argument& e) {
    throw flag_error(given("--N") ? "N" : "k", e.what());
  }
  if (given("--epsilon")) cfg.epsilon = fl.epsilon;
  if (given("--prec")) cfg.precision = fl.precision;
  if (given("--radius")) cfg.target_radius = fl.radius;
  if (given("--max-prec")) cfg.max_precision = fl.max_precision;
  if (given("--out")) cfg.output_path = fl.out;
  if (given("--format")) cfg.output_format = fl.format;
  if (given("--jobs")) cfg.jobs = fl.jobs;
  cfg.validate(fl.config.empty() ? "flags" : fl.config + " + flags");

  const auto rows = run_sweep(cfg);
  const auto summary = summarize(rows);
  auto emit = [&](std::ostream& o) {
    if (cfg.output_format == "json") {
      write_json(o, cfg, rows, summary);
    } else {
      write_csv(o, rows);
    }
  };
  std::ostream* summary_stream = &err;
  if (cfg.output_path.empty()) {
    emit(out);
  } else {
    auto f = open_output(cfg.output_path);
    emit(f);
    summary_stream = &out;
  }
  *summary_stream << "rows=" << summary.rows << " nonzero=" << summary.nonzero
                  << " undetermined=" << summary.undetermined << '\n';
  return summary.undetermined == 0 ? kExitOk : kExitUndetermined;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified Kloosterman sums, Bessel values and Poincare series coefficients"};
  app.name("pns");
  app.require_subcommand(1);
  app.fallthrough();

  Flags fl;
  app.add_option("--prec", fl.precision, "working precision in bits")->check(CLI::Range(53L, 1L << 20));
  app.add_option("--radius", fl.radius, "target radius for coefficients")->check(CLI::PositiveNumber);
  app.add_option("--max-prec", fl.max_precision, "precision ceiling for sign certification")
      ->check(CLI::Range(53L, 1L << 20));
  app.add_option("--out", fl.out, "output file");
  app.add_option("--format", fl.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--route", fl.route, "Kloosterman route")->check(CLI::IsMember({"direct", "factored", "both", "auto"}));
  app.add_option("--epsilon", fl.epsilon, "exponent slack of the vanishing window")->check(CLI::PositiveNumber);

  std::int64_t a = 0, b = 0, m_signed = 0;
  std::uint64_t c = 0, N = 0, p = 0, I = 0, m = 0, n = 0, n_max = 0;
  unsigned k = 0;

  auto* kl = app.add_subcommand("kloosterman", "K(a, b, c) with its certified radius");
  kl->add_option("a", a)->required();
  kl->add_option("b", b)->required();
  kl->add_option("c", c)->required();

  auto* mo = app.add_subcommand("moment", "second moment S_2(m; N)");
  mo->add_option("m", m_signed)->required();
  mo->add_option("N", N)->required();

  auto* an = app.add_subcommand("angles", "Kloosterman angles at a prime and their KS distance to Sato-Tate");
  an->add_option("p", p)->required();
  an->add_option("m", m_signed)->required();
  an->add_option("I", I)->required();

  auto* co = app.add_subcommand("coeff", "certified Fourier coefficient p(m; n) of weight k and level N");
  co->add_option("k", k)->required();
  co->add_option("m", m)->required();
  co->add_option("N", N)->required();
  co->add_option("n", n)->required();
  co->add_option("--ratio-to", fl.ratio_to, "also print p(m; n) / p(m; n0)");

  auto* va = app.add_subcommand("vanishing", "first certified nonzero coefficient index");
  va->add_option("k", k)->required();
  va->add_option("m", m)->required();
  va->add_option("N", N)->required();
  va->add_option("--n-max", fl.n_max, "last index to scan (default 2N)");

  auto* ve = app.add_subcommand("verify", "theorem-range sweep with a CSV or JSON report");
  ve->add_option("--config", fl.config, "key = value config file; flags override it");
  ve->add_option("--theorem", fl.theorem, "1, 2 or 5");
  ve->add_option("--k", fl.k, "weight range start:end[:step]");
  ve->add_option("--N", fl.N, "comma separated levels");
  ve->add_option("--jobs", fl.jobs, "worker threads (0: all cores)");

  auto* ta = app.add_subcommand("tau", "tau(1..n_max) from the product expansion");
  ta->add_option("n_max", n_max)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (kl->parsed()) return cmd_kloosterman(a, b, c, fl, out, err);
    if (mo->parsed()) return cmd_moment(m_signed, N, fl, out);
    if (an->parsed()) return cmd_angles(p, m_signed, I, fl, out);
    if (co->parsed()) return cmd_coeff(k, m, N, n, fl, out);
    if (va->parsed()) return cmd_vanishing(k, m, N, fl, out);
    if (ve->parsed()) return cmd_verify(*ve, app, fl, out, err);
    if (ta->parsed()) return cmd_tau(n_max, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InternalContradiction& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace pns::cli
