#include "tmx/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmx/error.hpp"
#include "tmx/expansion.hpp"
#include "tmx/fields.hpp"
#include "tmx/identities.hpp"
#include "tmx/orthogonality.hpp"

namespace tmx {

namespace {

using Record = nlohmann::ordered_json;

constexpr int kSchema = 1;
constexpr double kSpeedOfLight = 299792458.0;

Record complex_json(cplx z) { return Record::array({z.real(), z.imag()}); }

Record header(const char* kind) {
  Record r;
  r["schema"] = kSchema;
  r["kind"] = kind;
  return r;
}

// --- output ------------------------------------------------------------------

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Record& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return csv_cell(Record(v.dump()));
}

// Numeric arrays become key_0, key_1, ...; anything else nested is embedded as JSON text.
void flatten(const std::string& key, const Record& v, std::vector<std::pair<std::string, Record>>& row) {
  if (v.is_array() && std::all_of(v.begin(), v.end(), [](const Record& e) { return e.is_number(); })) {
    for (std::size_t i = 0; i < v.size(); ++i) row.emplace_back(key + "_" + std::to_string(i), v[i]);
  } else {
    row.emplace_back(key, v);
  }
}

class Writer {
 public:
  Writer(std::ostream& out, bool csv) : out_(out), csv_(csv) {}
  ~Writer() { flush(); }

  void emit(const Record& r) {
    if (!csv_) {
      out_ << r.dump() << '\n';
      return;
    }
    std::vector<std::pair<std::string, Record>> row;
    for (auto it = r.begin(); it != r.end(); ++it) flatten(it.key(), it.value(), row);
    for (const auto& [k, v] : row) {
      if (seen_.insert(k).second) columns_.push_back(k);
    }
    rows_.push_back(std::move(row));
  }

  void flush() {
    if (!csv_ || rows_.empty()) return;
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out_ << ',';
        for (const auto& [k, v] : row) {
          if (k == columns_[i]) {
            out_ << csv_cell(v);
            break;
          }
        }
      }
      out_ << '\n';
    }
    rows_.clear();
  }

 private:
  std::ostream& out_;
  bool csv_;
  std::vector<std::string> columns_;
  std::set<std::string> seen_;
  std::vector<std::vector<std::pair<std::string, Record>>> rows_;
};

// --- shared options ----------------------------------------------------------

struct MediumOptions {
  double n_left = 1.5;
  double n_right = 1.0;
  bool generalized = false;

  HalfSpaceMedium build() const { return HalfSpaceMedium(n_left, n_right, generalized); }
};

struct ModeOptions {
  MediumOptions medium;
  double omega = 0.0;
  std::vector<double> kpar;
  std::string side = "L";
  std::string pol = "both";
  std::string variant = "raw";
  std::string rule = "continuity";
};

struct Common {
  std::string format;
  bool si = false;
  std::uint64_t seed = 1;
};

void add_medium(CLI::App* app, MediumOptions& m, bool required) {
  auto* o = app->add_option("--n-left", m.n_left, "Refractive index of z < 0");
  if (required) o->required();
  app->add_option("--n-right", m.n_right, "Refractive index of z >= 0")->capture_default_str();
  app->add_flag("--generalized", m.generalized, "Allow n_left < n_right");
}

void add_mode(CLI::App* app, ModeOptions& m, const std::vector<std::string>& pols) {
  add_medium(app, m.medium, true);
  app->add_option("--omega", m.omega, "Angular frequency")->required();
  app->add_option("--kpar", m.kpar, "Parallel wave vector (x [y])")->required()->expected(1, 2);
  app->add_option("--side", m.side, "Incidence side")->check(CLI::IsMember({"L", "R"}))->capture_default_str();
  app->add_option("--pol", m.pol, "Polarization")->check(CLI::IsMember(pols))->capture_default_str();
  app->add_option("--variant", m.variant, "Normalization")
      ->check(CLI::IsMember({"raw", "normalized"}))
      ->capture_default_str();
  app->add_option("--rule", m.rule, "Transmission coefficient rule")
      ->check(CLI::IsMember({"continuity", "literal"}))
      ->capture_default_str();
}

void add_common(CLI::App* app, Common& c, const char* default_format) {
  app->add_option("--format", c.format, std::string("Output format (default ") + default_format + ")")
      ->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--si", c.si, "Read omega in rad/s and lengths in metres");
}

Side parse_side(const std::string& s) { return s == "R" ? Side::Right : Side::Left; }
Polarization parse_pol(const std::string& s) { return s == "TM" ? Polarization::TM : Polarization::TE; }

std::vector<Polarization> pol_list(const std::string& s) {
  if (s == "both") return {Polarization::TE, Polarization::TM};
  return {parse_pol(s)};
}

TransmissionRule parse_rule(const std::string& s) {
  return s == "literal" ? TransmissionRule::SwappedNumerator : TransmissionRule::Continuity;
}

NormalizationVariant parse_variant(const std::string& s) {
  return s == "normalized" ? NormalizationVariant::Normalized : NormalizationVariant::Raw;
}

double omega_natural(double omega, bool si) { return si ? omega / kSpeedOfLight : omega; }

Vec2 kpar_vec(const std::vector<double>& v) { return {v.at(0), v.size() > 1 ? v[1] : 0.0}; }

Record coefficient_record(const TripleMode& m, TransmissionRule rule) {
  const ModeKinematics& k = m.kin;
  const bool te = m.pol == Polarization::TE;
  Record r = header("coeff");
  r["side"] = to_string(k.side);
  r["pol"] = to_string(m.pol);
  r["omega"] = k.omega;
  r["k_parallel"] = Record::array({k.k_parallel.x, k.k_parallel.y});
  r["n_i"] = k.n_i;
  r["n_t"] = k.n_t;
  r["K_i"] = k.K_i;
  r["K_t"] = complex_json(k.K_t);
  r["evanescent"] = k.evanescent();
  r[te ? "a_r" : "b_r"] = complex_json(m.r_coeff);
  r[te ? "a_t" : "b_t"] = complex_json(m.t_coeff);
  r["abs_r"] = std::abs(m.r_coeff);
  r["rule"] = rule == TransmissionRule::Continuity ? "continuity" : "literal";
  r["continuity_residual"] = boundary_continuity_residual(m).max();
  return r;
}

// --- subcommands -------------------------------------------------------------

int cmd_coeff(const ModeOptions& o, const Common& c, std::ostream& out) {
  const ModeKinematics kin =
      make_kinematics(o.medium.build(), omega_natural(o.omega, c.si), kpar_vec(o.kpar), parse_side(o.side));
  const TransmissionRule rule = parse_rule(o.rule);
  Writer w(out, c.format == "csv");
  for (Polarization p : pol_list(o.pol)) w.emit(coefficient_record(build_mode(kin, p, parse_variant(o.variant), rule), rule));
  return kExitPass;
}

struct SweepOptions {
  ModeOptions mode;
  double kpar_min = 0.0;
  std::optional<double> kpar_max;
  int steps = 101;
};

int cmd_sweep(const SweepOptions& o, const Common& c, std::ostream& out) {
  const HalfSpaceMedium medium = o.mode.medium.build();
  const double omega = omega_natural(o.mode.omega, c.si);
  const Side side = parse_side(o.mode.side);
  const double n_i = side == Side::Left ? medium.n_left() : medium.n_right();
  const double hi = o.kpar_max.value_or(0.999 * n_i * omega);
  if (o.steps < 1 || o.kpar_min < 0.0 || hi < o.kpar_min) {
    throw Error(ErrorCode::kInvalidArgument, "sweep needs 0 <= kpar-min <= kpar-max and steps >= 1");
  }
  const TransmissionRule rule = parse_rule(o.mode.rule);
  Writer w(out, c.format == "csv");
  for (int i = 0; i < o.steps; ++i) {
    const double kp = o.steps == 1 ? o.kpar_min : o.kpar_min + (hi - o.kpar_min) * i / (o.steps - 1);
    const ModeKinematics kin = make_kinematics(medium, omega, {kp, 0.0}, side);
    for (Polarization p : pol_list(o.mode.pol)) {
      w.emit(coefficient_record(build_mode(kin, p, parse_variant(o.mode.variant), rule), rule));
    }
  }
  return kExitPass;
}

struct SampleOptions {
  ModeOptions mode;
  std::vector<double> x{0.0, 0.0, 1.0}, y{0.0, 0.0, 1.0}, z{0.0, 0.0, 1.0};
  double t = 0.0;
};

AxisSpec axis(const std::vector<double>& v) {
  const double count = v.at(2);
  if (count < 1.0 || count != std::floor(count)) throw Error(ErrorCode::kInvalidArgument, "axis count must be a positive integer");
  return AxisSpec{v[0], v[1], static_cast<int>(count)};
}

int cmd_sample(const SampleOptions& o, const Common& c, std::ostream& out) {
  const ModeKinematics kin = make_kinematics(o.mode.medium.build(), omega_natural(o.mode.omega, c.si),
                                             kpar_vec(o.mode.kpar), parse_side(o.mode.side));
  const TripleMode m = build_mode(kin, parse_pol(o.mode.pol), parse_variant(o.mode.variant), parse_rule(o.mode.rule));
  const std::vector<FieldSample> samples = sample_grid(m, GridSpec{axis(o.x), axis(o.y), axis(o.z)});
  const double t = c.si ? o.t * kSpeedOfLight : o.t;
  const cplx phase = std::exp(cplx(0.0, -kin.omega * t));
  Writer w(out, c.format == "csv");
  for (const FieldSample& s : samples) {
    Record r = header("sample");
    r["x"] = s.x.x;
    r["y"] = s.x.y;
    r["z"] = s.x.z;
    const cplx e[3] = {s.E.x * phase, s.E.y * phase, s.E.z * phase};
    const cplx b[3] = {s.B.x * phase, s.B.y * phase, s.B.z * phase};
    const char* axes = "xyz";
    for (int i = 0; i < 3; ++i) {
      r[std::string("E") + axes[i] + "_re"] = e[i].real();
      r[std::string("E") + axes[i] + "_im"] = e[i].imag();
    }
    for (int i = 0; i < 3; ++i) {
      r[std::string("B") + axes[i] + "_re"] = b[i].real();
      r[std::string("B") + axes[i] + "_im"] = b[i].imag();
    }
    r["abs_E"] = std::sqrt(std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]));
    r["abs_B"] = std::sqrt(std::norm(b[0]) + std::norm(b[1]) + std::norm(b[2]));
    w.emit(r);
  }
  return kExitPass;
}

struct IdentityOptions {
  std::size_t samples = 10000;
  bool paper_eq2 = false;
};

int cmd_verify_identities(const IdentityOptions& o, const Common& c, std::ostream& out) {
  IdentitySuiteConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = c.seed;
  cfg.rule = o.paper_eq2 ? TransmissionRule::SwappedNumerator : TransmissionRule::Continuity;
  const std::vector<IdentityReport> reports = run_identity_suite(cfg);
  Writer w(out, c.format == "csv");
  bool ok = true;
  for (const IdentityReport& rep : reports) {
    Record r = header("identity");
    r["name"] = rep.name;
    r["samples"] = rep.samples;
    r["seed"] = c.seed;
    r["rule"] = o.paper_eq2 ? "literal" : "continuity";
    r["max_abs_residual"] = rep.max_abs_residual;
    r["tolerance"] = rep.tolerance;
    r["exact_points"] = rep.exact_points;
    r["exact_verified"] = rep.exact_verified;
    r["verdict"] = rep.passed() ? "pass" : "fail";
    ok = ok && rep.passed();
    w.emit(r);
  }
  return ok ? kExitPass : kExitVerificationFailure;
}

struct OrthogonalityOptions {
  std::vector<std::string> classes;
  int pairs = 4;
  bool oracle = false;
  double box = 50.0;
  std::vector<double> epsilons;
  int order = 2;
  double sigma = 1e-2;
};

int cmd_verify_orthogonality(const OrthogonalityOptions& o, const Common& c, std::ostream& out) {
  OrthogonalitySuiteConfig cfg;
  cfg.classes = o.classes;
  cfg.seed = c.seed;
  cfg.random_pairs = o.pairs;
  cfg.oracle = o.oracle;
  cfg.oracle_box = o.box;
  if (!o.epsilons.empty()) cfg.params.epsilons = o.epsilons;
  cfg.params.extrapolation_order = o.order;
  cfg.params.smear_sigma = o.sigma;
  if (o.pairs < 0 || o.box <= 0.0) throw Error(ErrorCode::kInvalidArgument, "pairs must be >= 0 and box > 0");
  if (!cfg.oracle) {
    for (const std::string& cls : cfg.classes) {
      if (cls.rfind("oracle-", 0) == 0) cfg.oracle = true;
    }
  }
  const std::vector<OrthogonalityRecord> recs = run_orthogonality_suite(cfg);
  Writer w(out, c.format == "csv");
  std::size_t failed = 0;
  for (const OrthogonalityRecord& rec : recs) {
    Record r = header("overlap");
    r["class"] = rec.pair_class;
    r["pair"] = rec.descriptor;
    r["form"] = rec.form;
    Record table = Record::array();
    for (const DampedValue& d : rec.table) table.push_back(Record::array({d.epsilon, d.value.real(), d.value.imag()}));
    r["table"] = table;
    r["value"] = complex_json(rec.value);
    Record deltas = Record::array();
    for (const DeltaWeight& d : rec.delta_weights) {
      deltas.push_back(Record::array({d.location, d.weight.real(), d.weight.imag()}));
    }
    r["delta_weights"] = deltas;
    r["scale"] = rec.scale;
    r["epsilon_exponent"] = rec.epsilon_exponent ? Record(*rec.epsilon_exponent) : Record(nullptr);
    r["expected"] = rec.expected;
    r["residual"] = rec.residual;
    r["tolerance"] = std::isfinite(rec.tolerance) ? Record(rec.tolerance) : Record(nullptr);
    r["verdict"] = rec.pass ? "pass" : "fail";
    if (!rec.pass) ++failed;
    w.emit(r);
  }
  w.flush();
  if (c.format == "json") {
    Record s = header("summary");
    s["records"] = recs.size();
    s["failed"] = failed;
    out << s.dump() << '\n';
  }
  return failed == 0 ? kExitPass : kExitVerificationFailure;
}

struct EnergyOptions {
  double n_left = 1.5;
  std::string side = "L";
  std::string pol = "TE";
  double incidence = 20.0;
  double bandwidth = 0.02;
  double wavelength = 1.0;
  double box = 70.0;  // full side, carrier wavelengths
  double ppw = 8.0;
  double periods = 5.0;
  bool full_3d = false;
  std::string spectrum;
  std::string labeling = "mode-side";
};

int cmd_energy(const EnergyOptions& o, const Common& c, std::ostream& out) {
  PacketSpectrum spec;
  double lambda = o.wavelength;
  if (!o.spectrum.empty()) {
    std::ifstream in(o.spectrum);
    if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open spectrum file '" + o.spectrum + "'");
    try {
      spec = nlohmann::json::parse(in).get<PacketSpectrum>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, std::string("bad spectrum file: ") + e.what());
    }
    lambda = 2.0 * kPi / spec.bandwidth.carrier.norm();
  } else {
    GaussianPacketConfig g;
    g.n_left = o.n_left;
    g.side = parse_side(o.side);
    g.pol = parse_pol(o.pol);
    g.wavenumber = 2.0 * kPi / lambda;
    g.incidence_deg = o.incidence;
    g.relative_bandwidth = o.bandwidth;
    g.collapse_y = !o.full_3d;
    g.box_half_extent = 0.5 * o.box * lambda;
    spec = gaussian_packet(g);
  }
  validate(spec, o.labeling == "literal" ? DomainLabeling::Literal : DomainLabeling::ModeSide);
  const Box box{0.5 * o.box * lambda, o.ppw};
  const double period = lambda;  // c = 1
  Writer w(out, c.format == "csv");
  double worst = 0.0;
  std::vector<double> energies;
  for (double t : {0.0, o.periods * period}) {
    const EnergyReport rep = energy_report(spec, box, t);
    Record r = header("energy");
    r["t"] = t;
    r["H_spatial"] = rep.H_spatial;
    r["H_diagonal"] = rep.H_diagonal;
    r["ratio"] = rep.ratio;
    r["tail_bound"] = tail_bound(spec, box, t);
    worst = std::max(worst, std::abs(rep.ratio - 1.0));
    energies.push_back(rep.H_spatial);
    w.emit(r);
  }
  const double drift = std::abs(energies[1] / energies[0] - 1.0);
  const bool pass = worst <= 0.02 && drift <= 0.01;
  Record v = header("energy-verdict");
  v["max_ratio_deviation"] = worst;
  v["ratio_tolerance"] = 0.02;
  v["time_drift"] = drift;
  v["drift_tolerance"] = 0.01;
  v["verdict"] = pass ? "pass" : "fail";
  w.emit(v);
  return pass ? kExitPass : kExitVerificationFailure;
}

// --- config merging ----------------------------------------------------------

bool given(const std::vector<std::string>& args, const std::string& flag) {
  for (const std::string& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string scalar_arg(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_number(v.get<double>());
  return v.dump();
}

// Returns args with the config file's keys appended wherever no explicit flag exists.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ConversionError(std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw CLI::ConversionError("config: top level must be an object");
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (given(rest, flag)) continue;
    const nlohmann::json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) rest.push_back(flag);
    } else if (v.is_array()) {
      rest.push_back(flag);
      for (const auto& e : v) rest.push_back(scalar_arg(e));
    } else if (!v.is_null()) {
      rest.push_back(flag);
      rest.push_back(scalar_arg(v));
    }
  }
  return rest;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Triple modes at a dielectric half-space", "tmx"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_help_all_flag("--help-all", "Help for all subcommands");

  Common common;
  ModeOptions coeff_opts;
  auto* coeff = app.add_subcommand("coeff", "Reflection and transmission coefficients of one mode");
  add_mode(coeff, coeff_opts, {"TE", "TM", "both"});
  add_common(coeff, common, "json");

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Coefficients over a range of |k_par| along x");
  add_medium(sweep, sweep_opts.mode.medium, true);
  sweep->add_option("--omega", sweep_opts.mode.omega, "Angular frequency")->required();
  sweep->add_option("--side", sweep_opts.mode.side, "Incidence side")->check(CLI::IsMember({"L", "R"}));
  sweep->add_option("--pol", sweep_opts.mode.pol, "Polarization")->check(CLI::IsMember({"TE", "TM", "both"}));
  sweep->add_option("--rule", sweep_opts.mode.rule, "Transmission rule")->check(CLI::IsMember({"continuity", "literal"}));
  sweep->add_option("--kpar-min", sweep_opts.kpar_min, "Start of the sweep");
  sweep->add_option("--kpar-max", sweep_opts.kpar_max, "End of the sweep (default 0.999 n_i omega)");
  sweep->add_option("--steps", sweep_opts.steps, "Number of points")->capture_default_str();
  add_common(sweep, common, "json");

  SampleOptions sample_opts;
  sample_opts.mode.pol = "TE";
  auto* sample = app.add_subcommand("sample", "Complex mode fields on a grid");
  add_mode(sample, sample_opts.mode, {"TE", "TM"});
  sample->add_option("--x", sample_opts.x, "min max count")->expected(3);
  sample->add_option("--y", sample_opts.y, "min max count")->expected(3);
  sample->add_option("--z", sample_opts.z, "min max count")->expected(3);
  sample->add_option("--t", sample_opts.t, "Time");
  add_common(sample, common, "csv");

  IdentityOptions id_opts;
  auto* ids = app.add_subcommand("verify-identities", "Run the identity suite");
  ids->add_option("--samples", id_opts.samples, "Random kinematics per identity")->capture_default_str();
  ids->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  ids->add_flag("--use-paper-eq2", id_opts.paper_eq2, "Use a_t = 2K_t/(K_i+K_t) instead of 1 + a_r");
  add_common(ids, common, "json");

  OrthogonalityOptions orth_opts;
  auto* orth = app.add_subcommand("verify-orthogonality", "Run the orthogonality pair matrix");
  orth->add_option("--classes", orth_opts.classes, "Comma-separated pair classes (default all)")->delimiter(',');
  orth->add_option("--pairs", orth_opts.pairs, "Random pairs per class")->capture_default_str();
  orth->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  orth->add_flag("--oracle", orth_opts.oracle, "Add packet box-quadrature comparisons");
  orth->add_option("--box", orth_opts.box, "Oracle box side in carrier wavelengths")->capture_default_str();
  orth->add_option("--epsilons", orth_opts.epsilons, "Damping sequence")->delimiter(',');
  orth->add_option("--order", orth_opts.order, "Extrapolation order")->capture_default_str();
  orth->add_option("--sigma", orth_opts.sigma, "Smearing width relative to K_i")->capture_default_str();
  add_common(orth, common, "json");

  EnergyOptions energy_opts;
  auto* energy = app.add_subcommand("energy", "Field energy of a Gaussian packet against the diagonal form");
  energy->add_option("--n-left", energy_opts.n_left, "Refractive index of z < 0")->capture_default_str();
  energy->add_option("--side", energy_opts.side, "Incidence side")->check(CLI::IsMember({"L", "R"}));
  energy->add_option("--pol", energy_opts.pol, "Polarization")->check(CLI::IsMember({"TE", "TM"}));
  energy->add_option("--incidence", energy_opts.incidence, "Incidence angle in degrees")->capture_default_str();
  energy->add_option("--bandwidth", energy_opts.bandwidth, "Relative bandwidth")->capture_default_str();
  energy->add_option("--wavelength", energy_opts.wavelength, "Carrier vacuum wavelength")->capture_default_str();
  energy->add_option("--box", energy_opts.box, "Box side in carrier wavelengths")->capture_default_str();
  energy->add_option("--ppw", energy_opts.ppw, "Quadrature points per shortest wavelength")->capture_default_str();
  energy->add_option("--periods", energy_opts.periods, "Second evaluation time in optical periods")
      ->capture_default_str();
  energy->add_flag("--full-3d", energy_opts.full_3d, "Integrate y as well instead of a y-independent packet");
  energy->add_option("--spectrum", energy_opts.spectrum, "Packet spectrum JSON file");
  energy->add_option("--labeling", energy_opts.labeling, "Which K domain each sample label must lie in")
      ->check(CLI::IsMember({"mode-side", "literal"}))
      ->capture_default_str();
  add_common(energy, common, "json");

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
    std::vector<const char*> argv{"tmx"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  if (common.format.empty()) common.format = *sample ? "csv" : "json";

  try {
    if (*coeff) return cmd_coeff(coeff_opts, common, out);
    if (*sweep) return cmd_sweep(sweep_opts, common, out);
    if (*sample) return cmd_sample(sample_opts, common, out);
    if (*ids) {
      if (id_opts.samples == 0) throw Error(ErrorCode::kInvalidArgument, "--samples must be positive");
      return cmd_verify_identities(id_opts, common, out);
    }
    if (*orth) return cmd_verify_orthogonality(orth_opts, common, out);
    if (*energy) {
      if (energy_opts.box <= 0.0 || energy_opts.wavelength <= 0.0 || energy_opts.periods < 0.0) {
        throw Error(ErrorCode::kInvalidArgument, "box and wavelength must be positive, periods non-negative");
      }
      return cmd_energy(energy_opts, common, out);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTailTooLarge) {
      Record r = header("error");
      r["code"] = std::string(to_string(e.code()));
      r["message"] = e.what();
      out << r.dump() << '\n';
      err << e.what() << '\n';
      return kExitVerificationFailure;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace tmx
