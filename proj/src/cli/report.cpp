#include <algorithm>
#include <atomic>
#include <exception>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "pns/cli.hpp"

namespace pns::cli {

std::string format_value(const CertifiedReal& x) { return x.mid().to_string(17); }

std::string format_radius(const CertifiedReal& x) { return x.rad().to_string(3, MPFR_RNDU); }

ReportRow make_row(const poincare::VanishingReport& report) {
  ReportRow row;
  row.k = report.k;
  row.N = report.N;
  row.m = report.m;
  row.n_first = report.first_nonzero_n;
  row.precision = report.precision_used;
  if (report.witness) {
    row.value = format_value(report.witness->value);
    row.radius = format_radius(report.witness->value);
    row.sign = poincare::sign_name(report.witness->sign);
    row.status = "nonzero";
  } else {
    row.sign = poincare::sign_name(poincare::Sign::undetermined);
    row.status = "undetermined";
  }
  return row;
}

Summary summarize(const std::vector<ReportRow>& rows) {
  Summary s;
  s.rows = rows.size();
  for (const auto& r : rows) (r.status == "nonzero" ? s.nonzero : s.undetermined)++;
  return s;
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << r.N << ',' << r.m << ',' << (r.n_first ? std::to_string(*r.n_first) : "") << ','
        << r.value << ',' << r.radius << ',' << r.sign << ',' << r.precision << ',' << r.status << '\n';
  }
}

void write_json(std::ostream& out, const SweepConfig& config, const std::vector<ReportRow>& rows,
                const Summary& summary) {
  using nlohmann::json;
  json cfg = {
      {"theorem", config.theorem_id},
      {"k_start", config.k_range.start},
      {"k_end", config.k_range.end},
      {"k_step", config.k_range.step},
      {"N", config.N_list},
      {"epsilon", config.epsilon ? json(*config.epsilon) : json(nullptr)},
      {"precision", config.precision},
      {"target_radius", config.target_radius},
      {"max_precision", config.max_precision},
      {"format", config.output_format},
  };
  json jrows = json::array();
  for (const auto& r : rows) {
    jrows.push_back({
        {"k", r.k},
        {"N", r.N},
        {"m", r.m},
        {"n_first", r.n_first ? json(*r.n_first) : json(nullptr)},
        {"value", r.value},
        {"radius", r.radius},
        {"sign", r.sign},
        {"precision", r.precision},
        {"status", r.status},
    });
  }
  const json doc = {
      {"config", cfg},
      {"rows", jrows},
      {"summary", {{"rows", summary.rows}, {"nonzero", summary.nonzero}, {"undetermined", summary.undetermined}}},
  };
  out << doc.dump(2) << '\n';
}

std::vector<ReportRow> run_sweep(const SweepConfig& config) {
  struct Cell {
    unsigned k;
    std::uint64_t N, m;
  };
  std::vector<Cell> cells;
  for (const unsigned k : config.k_range.values()) {
    for (const auto N : config.N_list) {
      for (const auto m : poincare::theorem_indices(config.theorem_id, k, N)) cells.push_back({k, N, m});
    }
  }

  std::vector<ReportRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      const Cell& c = cells[i];
      try {
        const std::uint64_t n_max = config.epsilon ? poincare::vanishing_window(c.N, *config.epsilon)
                                                   : poincare::theorem_scan_length(config.theorem_id, c.N);
        rows[i] = make_row(poincare::order_of_vanishing(c.k, c.m, c.N, n_max, config.max_precision, config.precision));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned jobs = config.jobs != 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace pns::cli
