// Acceptance runner: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tmx/error.hpp"
#include "tmx/expansion.hpp"
#include "tmx/fields.hpp"
#include "tmx/identities.hpp"
#include "tmx/orthogonality.hpp"
#include "tmx/overlap.hpp"

using namespace tmx;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(2);
  os << std::scientific << v;
  return os.str();
}

struct ClassSummary {
  bool pass = true;
  double worst = 0.0;
  std::size_t records = 0;
  std::string first_failure;
};

ClassSummary summarize(const std::vector<OrthogonalityRecord>& recs, const std::vector<std::string>& classes) {
  ClassSummary s;
  for (const auto& r : recs) {
    if (std::find(classes.begin(), classes.end(), r.pair_class) == classes.end()) continue;
    ++s.records;
    s.worst = std::max(s.worst, r.residual);
    if (!r.pass && s.pass) {
      s.pass = false;
      s.first_failure = r.pair_class + " " + r.descriptor + " residual " + sci(r.residual);
    }
  }
  if (s.records == 0) s.pass = false;
  return s;
}

Outcome criterion_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto reports = run_identity_suite(IdentitySuiteConfig{});
  const double dt = seconds_since(t0);
  bool ok = reports.size() == 8 && dt <= 10.0;
  double worst = 0.0;
  std::size_t exact = 0;
  std::string failed;
  for (const auto& r : reports) {
    ok = ok && r.passed() && r.samples == 10000 && r.exact_points >= 10;
    if (!r.passed()) failed += " " + r.name;
    if (r.name != "delta_jacobian") worst = std::max(worst, r.max_abs_residual);
    exact = exact == 0 ? r.exact_points : std::min(exact, r.exact_points);
  }
  std::ostringstream os;
  os << reports.size() << " identities x 10^4 samples, max residual " << sci(worst) << " (tol 1e-12), >= " << exact
     << " exact points each, " << dt << " s";
  if (!failed.empty()) os << "; failed:" << failed;
  return {ok, os.str()};
}

Outcome criterion_boundary() {
  KinematicsSampler s(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto k = s.single(KinematicsSampler::Regime::Any, i % 2 ? Side::Right : Side::Left);
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
      for (auto v : {NormalizationVariant::Raw, NormalizationVariant::Normalized}) {
        worst = std::max(worst, boundary_continuity_residual(build_mode(k, p, v)).max());
      }
    }
  }
  const HalfSpaceMedium m(std::sqrt(2.0));
  const auto ref = make_kinematics(m, std::sqrt(3.0), {std::sqrt(2.0), 0.0}, Side::Left);
  const double d_e =
      boundary_continuity_residual(build_mode(ref, Polarization::TE, NormalizationVariant::Raw,
                                              TransmissionRule::SwappedNumerator))
          .d_E_tan;
  IdentitySuiteConfig cfg;
  cfg.samples = 2000;
  cfg.rule = TransmissionRule::SwappedNumerator;
  std::vector<std::string> failed;
  for (const auto& r : run_identity_suite(cfg)) {
    if (!r.passed()) failed.push_back(r.name);
  }
  const bool literal_fails = failed == std::vector<std::string>{"te_bracket", "surface_identity"};
  const bool ok = worst <= 1e-13 && std::abs(d_e - 2.0 / 3.0) <= 1e-13 && literal_fails;
  std::ostringstream os;
  os << "max continuity residual " << sci(worst) << " (tol 1e-13); literal rule d_E_tan = " << d_e
     << ", failing identities:";
  for (const auto& f : failed) os << " " << f;
  return {ok, os.str()};
}

Outcome from_classes(const std::vector<OrthogonalityRecord>& recs, const std::vector<std::string>& classes,
                     const std::string& what, double tol) {
  const ClassSummary s = summarize(recs, classes);
  std::ostringstream os;
  os << s.records << " " << what << ", worst residual " << sci(s.worst) << " (tol " << sci(tol) << ")";
  if (!s.pass) os << "; first failure: " << s.first_failure;
  return {s.pass, os.str()};
}

Outcome criterion_oracle() {
  OrthogonalitySuiteConfig cfg;
  cfg.classes = {"oracle-identical", "oracle-counter", "oracle-cross", "oracle-sweep"};
  cfg.oracle = true;
  cfg.oracle_box = 50.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto recs = run_orthogonality_suite(cfg);
  const double dt = seconds_since(t0);
  bool ok = !recs.empty();
  std::ostringstream os;
  os << "L sweep errors";
  for (const auto& r : recs) {
    ok = ok && r.pass;
    if (r.pair_class == "oracle-sweep") os << " " << sci(r.residual);
  }
  double counter = 0.0, cross = 0.0;
  for (const auto& r : recs) {
    if (r.pair_class == "oracle-counter") counter = std::max(counter, r.residual);
    if (r.pair_class == "oracle-cross") cross = std::max(cross, r.residual);
  }
  os << " at L = 20/35/50 (tol 1e-2 at 50, decreasing); counter " << sci(counter) << ", TE x TM " << sci(cross)
     << " of norm; " << dt << " s";
  return {ok, os.str()};
}

Outcome criterion_energy() {
  GaussianPacketConfig c;
  c.box_half_extent = 35.0;
  const Box box{35.0, 8.0};
  const double period = 2.0 * kPi / c.wavenumber;
  double worst_ratio = 0.0, worst_drift = 0.0;
  for (Side side : {Side::Left, Side::Right}) {
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
      c.side = side;
      c.pol = pol;
      const PacketSpectrum p = gaussian_packet(c);
      const EnergyReport r0 = energy_report(p, box, 0.0);
      const EnergyReport r5 = energy_report(p, box, 5.0 * period);
      worst_ratio = std::max({worst_ratio, std::abs(r0.ratio - 1.0), std::abs(r5.ratio - 1.0)});
      worst_drift = std::max(worst_drift, std::abs(r5.H_spatial / r0.H_spatial - 1.0));
    }
  }
  // Packets with disjoint spectral support: carriers 30% apart, each 2% wide.
  c.side = Side::Left;
  c.pol = Polarization::TE;
  const PacketSpectrum a = gaussian_packet(c);
  c.wavenumber *= 1.3;
  const PacketSpectrum b = gaussian_packet(c);
  const double additivity =
      std::abs(field_energy(superpose(a, b), box) / (field_energy(a, box) + field_energy(b, box)) - 1.0);
  const bool ok = worst_ratio <= 0.02 && worst_drift <= 0.01 && additivity <= 0.02;
  std::ostringstream os;
  os << "|H/H_diag - 1| <= " << sci(worst_ratio) << " (tol 2e-2); drift over 5 periods " << sci(worst_drift)
     << " (tol 1e-2); additivity error " << sci(additivity) << " (tol 2e-2)";
  return {ok, os.str()};
}

std::string capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

Outcome criterion_determinism() {
  const std::string bin = TMX_BINARY;
  const std::vector<std::string> runs{
      "verify-identities --samples 2000 --seed 7",
      "verify-orthogonality --pairs 3 --seed 11",
      "sample --n-left 1.5 --omega 2 --kpar 1.2 0.4 --pol TM --x -2 2 21 --z -2 2 21",
      "sweep --n-left 1.5 --omega 1 --steps 50 --format csv",
      "energy --periods 2",
  };
  bool ok = true;
  std::size_t bytes = 0;
  std::string diverged;
  for (const std::string& args : runs) {
    const std::string a = capture(bin + " " + args + " 2>/dev/null");
    const std::string b = capture(bin + " " + args + " 2>/dev/null");
    const std::string c = capture("TMX_THREADS=1 " + bin + " " + args + " 2>/dev/null");
    const std::string d = capture("TMX_THREADS=5 " + bin + " " + args + " 2>/dev/null");
    bytes += a.size();
    if (a.empty() || a != b || a != c || a != d) {
      ok = false;
      if (diverged.empty()) diverged = args;
    }
  }
  std::ostringstream os;
  os << runs.size() << " commands, 4 runs each (repeat, 1 thread, 5 threads), " << bytes << " bytes compared";
  if (!ok) os << "; differs: " << diverged;
  return {ok, os.str()};
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::vector<OrthogonalityRecord> matrix;
  double matrix_seconds = 0.0;
  std::string matrix_error;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    matrix = run_orthogonality_suite(OrthogonalitySuiteConfig{});
    matrix_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    matrix_error = e.what();
  }
  auto matrix_outcome = [&](const std::vector<std::string>& classes, const std::string& what, double tol) {
    if (!matrix_error.empty()) return Outcome{false, "exception: " + matrix_error};
    return from_classes(matrix, classes, what, tol);
  };

  std::vector<std::pair<std::string, Outcome>> results;
  results.emplace_back("identity suite", guarded(criterion_identities));
  results.emplace_back("boundary adjudication", guarded(criterion_boundary));
  {
    Outcome o = matrix_outcome({"te-counter", "te-counter-evanescent", "tm-counter", "tm-counter-evanescent",
                                "te-co", "tm-co", "tm-co-mixed", "cross-electric", "cross-magnetic"},
                               "vanishing overlaps", 1e-8);
    o.pass = o.pass && matrix_seconds <= 60.0;
    std::ostringstream os;
    os << o.detail << "; full matrix " << matrix_seconds << " s";
    o.detail = os.str();
    results.emplace_back("orthogonality, vanishing cases", o);
  }
  results.emplace_back("delta normalization",
                       matrix_outcome({"delta-te", "delta-tm", "delta-tm-evanescent"}, "smeared weights", 5e-3));
  results.emplace_back("mixed theorem", matrix_outcome({"mixed-conjugate", "mixed-plain"}, "pairs", 1e-8));
  results.emplace_back("oracle equivalence", guarded(criterion_oracle));
  results.emplace_back("Hamiltonian diagonalization", guarded(criterion_energy));
  results.emplace_back("determinism", guarded(criterion_determinism));

  bool all = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, o] = results[i];
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << name << ": " << o.detail << '\n';
    all = all && o.pass;
  }
  std::cout << (all ? "all acceptance criteria pass" : "acceptance FAILED") << std::endl;
  return all ? 0 : 1;
}
