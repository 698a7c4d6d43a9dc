#include "nhslice/io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace nhs {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string grid_hash(const Model& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (double s : m.vgrid().s_int()) os << s << ' ';
  for (double a : m.hybrid().A_int) os << a << ' ';
  for (double b : m.hybrid().B_int) os << b << ' ';
  os << m.hybrid().p0_ref << ' ' << m.hgrid().ne() << ' ' << m.hgrid().length();
  return hex64(fnv1a64(os.str()));
}

namespace {

const char* const kFieldNames[] = {"u", "v", "w", "phi", "Theta", "dpids"};

}  // namespace

void write_snapshot(std::ostream& os, const Model& m, const PrognosticState& s, double time) {
  os << "# nhslice snapshot\n";
  os << "n " << m.n() << "\nncol " << m.ncol() << "\ngrid_hash " << grid_hash(m) << "\n";
  os << std::setprecision(17) << "time " << time << "\n";
  int i = 0;
  s.for_each_field([&](const ColumnField& f) {
    os << kFieldNames[i++] << "\n";
    for (int c = 0; c < f.ncol(); ++c) {
      auto col = f.column(c);
      for (std::size_t k = 0; k < col.size(); ++k) os << (k ? " " : "") << col[k];
      os << "\n";
    }
  });
}

PrognosticState read_snapshot(std::istream& is, const Model& m, double* time) {
  std::string line, tag;
  std::getline(is, line);
  if (line.rfind("# nhslice snapshot", 0) != 0) throw ConfigError("not a snapshot file");
  int n = 0, ncol = 0;
  std::string hash;
  double t = 0.0;
  is >> tag >> n >> tag >> ncol >> tag >> hash >> tag >> t;
  if (!is) throw ConfigError("snapshot: malformed header");
  if (n != m.n() || ncol != m.ncol())
    throw ConfigError("snapshot: shape does not match the configured grid");
  if (hash != grid_hash(m)) throw ConfigError("snapshot: grid hash mismatch");
  PrognosticState s = m.make_state();
  int i = 0;
  s.for_each_field([&](ColumnField& f) {
    is >> tag;
    if (tag != kFieldNames[i]) throw ConfigError("snapshot: expected field " + std::string(kFieldNames[i]));
    ++i;
    for (double& x : f.data())
      if (!(is >> x)) throw ConfigError("snapshot: truncated field " + tag);
  });
  if (time) *time = t;
  return s;
}

const std::vector<std::string> kBudgetColumns = {"time", "K",  "I",   "P",   "E",   "T1",
                                                 "T2",   "T3", "S1",  "S2",  "S3",  "R_P",
                                                 "R_I",  "R_K", "dE_remap"};

void write_budget_header(std::ostream& os) {
  for (std::size_t i = 0; i < kBudgetColumns.size(); ++i) os << (i ? "," : "") << kBudgetColumns[i];
  os << "\n";
}

void write_budget_row(std::ostream& os, const EnergyBudget& b) {
  const auto& e = b.energies;
  const auto& t = b.transfers;
  const auto& r = b.residuals;
  const double vals[] = {b.time, e.K,  e.I,  e.P,   e.E(), t.T1,  t.T2,      t.T3,
                         t.S1,   t.S2, t.S3, r.R_P, r.R_I, r.R_K, b.dE_remap};
  std::ostringstream row;
  row << std::setprecision(17);
  for (std::size_t i = 0; i < std::size(vals); ++i) row << (i ? "," : "") << vals[i];
  os << row.str() << "\n";
}

}  // namespace nhs
