#include "rapcd/trace.hpp"

#include <cstdio>
#include <stdexcept>

namespace rapcd {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

CsvTraceSink::CsvTraceSink(const std::string& prefix)
    : trace_(prefix + ".trace.csv"), restarts_(prefix + ".restarts.csv") {
  if (!trace_ || !restarts_)
    throw std::runtime_error("CsvTraceSink: cannot open output files for prefix " +
                             prefix);
}

const char* CsvTraceSink::iter_header() {
  return "run_id,k,coord_updates,epoch,F,F_minus_Fref,duality_gap,elapsed_seconds";
}

const char* CsvTraceSink::restart_header() {
  return "run_id,restart_index,K_r,F_before,F_after,kept";
}

void CsvTraceSink::iter(const IterRecord& r) {
  if (!trace_header_written_) {
    trace_ << iter_header() << '\n';
    trace_header_written_ = true;
  }
  trace_ << r.run_id << ',' << r.k << ',' << r.coord_updates << ','
         << fmt(r.epoch) << ',' << fmt(r.F) << ','
         << (r.has_fref ? fmt(r.F_minus_Fref) : std::string{}) << ','
         << (r.has_gap ? fmt(r.duality_gap) : std::string{}) << ','
         << fmt(r.elapsed_seconds) << '\n';
}

void CsvTraceSink::restart(const RestartRecord& r) {
  if (!restart_header_written_) {
    restarts_ << restart_header() << '\n';
    restart_header_written_ = true;
  }
  restarts_ << r.run_id << ',' << r.restart_index << ',' << r.period << ','
            << fmt(r.F_before) << ',' << fmt(r.F_after) << ','
            << (r.kept_candidate ? "candidate" : "previous") << '\n';
}

}  // namespace rapcd
