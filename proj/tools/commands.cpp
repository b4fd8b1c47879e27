#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abt/catqubit.hpp"
#include "abt/dissipation.hpp"
#include "abt/encoding.hpp"
#include "abt/projection.hpp"
#include "abt/serialize.hpp"

namespace abt::cli {
namespace {

using nlohmann::json;

// Bad or missing parameters map to exit 2; computation failures to exit 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw ConfigError("malformed config JSON in " + path);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  return doc;
}

void check_keys(const json& doc, std::initializer_list<const char*> allowed,
                const char* where) {
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + where);
    }
  }
}

double need_number(const json& c, const char* key) {
  if (!c.contains(key) || !c[key].is_number()) {
    throw ConfigError(std::string("missing or non-numeric \"") + key + "\"");
  }
  return c[key].get<double>();
}

double number_or(const json& c, const char* key, double fallback) {
  if (!c.contains(key)) return fallback;
  if (!c[key].is_number()) throw ConfigError(std::string("\"") + key + "\" must be a number");
  return c[key].get<double>();
}

long int_or(const json& c, const char* key, long fallback) {
  if (!c.contains(key)) return fallback;
  if (!c[key].is_number_integer()) {
    throw ConfigError(std::string("\"") + key + "\" must be an integer");
  }
  return c[key].get<long>();
}

std::string string_or(const json& c, const char* key, const std::string& fallback) {
  if (!c.contains(key)) return fallback;
  if (!c[key].is_string()) throw ConfigError(std::string("\"") + key + "\" must be a string");
  return c[key].get<std::string>();
}

bool bool_or(const json& c, const char* key, bool fallback) {
  if (!c.contains(key)) return fallback;
  if (!c[key].is_boolean()) throw ConfigError(std::string("\"") + key + "\" must be a boolean");
  return c[key].get<bool>();
}

Complex complex_of(const json& value, const char* key) {
  if (value.is_number()) return Complex(value.get<double>(), 0.0);
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return Complex(value[0].get<double>(), value[1].get<double>());
  }
  throw ConfigError(std::string("\"") + key + "\" must be a number or a [re, im] pair");
}

Complex need_alpha(const json& c) {
  if (!c.contains("alpha")) throw ConfigError("missing \"alpha\"");
  return complex_of(c["alpha"], "alpha");
}

int resolve_cutoff(const json& c, Complex alpha) {
  const long requested = int_or(c, "cutoff", 0);
  if (requested == 0) return FockSpace::default_cutoff(alpha);
  if (requested < 2) throw ConfigError("\"cutoff\" must be at least 2");
  return static_cast<int>(requested);
}

std::string resolve_format(const json& c, const std::string& fallback,
                           std::initializer_list<const char*> allowed) {
  const std::string format = string_or(c, "format", fallback);
  for (const char* f : allowed) {
    if (format == f) return format;
  }
  throw ConfigError("this command cannot emit format \"" + format + "\"");
}

void write_output(const json& c, const std::string& text) {
  const std::string path = string_or(c, "out", "");
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
  if (!out) throw Error("failed writing output file: " + path);
}

void validate_bits(const std::string& bits) {
  for (char ch : bits) {
    if (ch != '0' && ch != '1') {
      throw ConfigError("\"bits\" may contain only '0' and '1'");
    }
  }
}

double resolve_time(const json& c, const DispersiveModel& model,
                    const std::string& default_choice, std::string* choice_out) {
  const std::string choice = string_or(c, "t_choice", default_choice);
  if (choice_out != nullptr) *choice_out = choice;
  if (choice == "transfer") return transfer_time(model);
  if (choice == "pattern") return pattern_time(model);
  if (choice == "custom") {
    const double t = need_number(c, "t");
    if (!std::isfinite(t)) throw ConfigError("\"t\" must be finite");
    return t;
  }
  throw ConfigError("\"t_choice\" must be transfer, pattern, or custom");
}

// ---------------------------------------------------------------------------
// transfer

int cmd_transfer(const json& c) {
  check_keys(c, {"alpha", "beta", "phi_ab", "t_choice", "t", "cutoff", "out", "format"},
             "transfer config");
  const Complex alpha = need_alpha(c);
  const double beta = number_or(c, "beta", 1.0);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("\"beta\" must be > 0");
  const ABPhase phase{need_number(c, "phi_ab")};
  const std::string format = resolve_format(c, "json", {"json", "csv"});

  const FockSpace space{resolve_cutoff(c, alpha)};
  const DispersiveModel model{beta, space};
  std::string choice;
  const double t = resolve_time(c, model, "transfer", &choice);

  const SpinFieldVector joint = joint_state(phase, alpha, model, t);
  if (std::abs(joint.norm() - 1.0) > 1e-9) {
    throw Error("joint state lost normalization");
  }
  const HadamardCatGate gate = hadamard_cat_gate(alpha, space);
  const double deviation = gate_unitarity_deviation(gate, alpha, space);

  double probability[2] = {0.0, 0.0};
  double cat_fid[2] = {0.0, 0.0};
  bool have_fid[2] = {false, false};
  for (Spin s : {Spin::Down, Spin::Up}) {
    const int k = s == Spin::Down ? 0 : 1;
    ProjectionResult pr;
    try {
      pr = project_spin(joint, s);
    } catch (const DomainError&) {
      continue;  // outcome has zero weight; leave probability 0 and fidelity unset
    }
    probability[k] = pr.probability;
    const Vec after_gate = gate.matrix * pr.post_field.amplitudes;
    if (after_gate.norm() < 1e-12) continue;
    cat_fid[k] = fidelity(FieldVector{after_gate},
                          transferred_cat(phase, s, alpha, space));
    have_fid[k] = true;
  }
  if (std::abs(probability[0] + probability[1] - 1.0) > 1e-9) {
    throw Error("projection probabilities do not sum to 1");
  }
  const bool trivial = bit_of_phase(phase) == 0;

  if (format == "json") {
    json doc;
    doc["alpha"] = {alpha.real(), alpha.imag()};
    doc["beta"] = beta;
    doc["phi_ab"] = phase.radians();
    doc["t"] = t;
    doc["t_choice"] = choice;
    doc["cutoff"] = space.cutoff();
    doc["coherent_overlap"] = std::exp(-2.0 * std::norm(alpha));
    doc["gate_unitarity_deviation"] = deviation;
    doc["trivial_transfer"] = trivial;
    json branches;
    const char* names[2] = {"down", "up"};
    for (int k = 0; k < 2; ++k) {
      json b;
      b["probability"] = probability[k];
      if (have_fid[k]) {
        b["cat_fidelity"] = cat_fid[k];
      } else {
        b["cat_fidelity"] = nullptr;
      }
      branches[names[k]] = b;
    }
    doc["branches"] = branches;
    write_output(c, doc.dump(2) + "\n");
  } else {
    std::string text = "key,value\n";
    text += "alpha_re," + fmt(alpha.real()) + "\n";
    text += "alpha_im," + fmt(alpha.imag()) + "\n";
    text += "beta," + fmt(beta) + "\n";
    text += "phi_ab," + fmt(phase.radians()) + "\n";
    text += "t," + fmt(t) + "\n";
    text += "cutoff," + std::to_string(space.cutoff()) + "\n";
    text += "coherent_overlap," + fmt(std::exp(-2.0 * std::norm(alpha))) + "\n";
    text += "gate_unitarity_deviation," + fmt(deviation) + "\n";
    text += std::string("trivial_transfer,") + (trivial ? "1" : "0") + "\n";
    text += "down_probability," + fmt(probability[0]) + "\n";
    text += "down_cat_fidelity," + (have_fid[0] ? fmt(cat_fid[0]) : "") + "\n";
    text += "up_probability," + fmt(probability[1]) + "\n";
    text += "up_cat_fidelity," + (have_fid[1] ? fmt(cat_fid[1]) : "") + "\n";
    write_output(c, text);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const json& c) {
  check_keys(c, {"alpha", "beta", "t_choice", "t", "sweep", "outcome", "cutoff", "out",
                 "format"},
             "sweep config");
  const Complex alpha = need_alpha(c);
  const double beta = number_or(c, "beta", 1.0);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("\"beta\" must be > 0");
  resolve_format(c, "csv", {"csv"});

  double start = 0.0;
  double stop = 2.0 * kPi;
  long steps = 101;
  if (c.contains("sweep")) {
    const json& s = c["sweep"];
    if (!s.is_object()) throw ConfigError("\"sweep\" must be an object");
    check_keys(s, {"start", "stop", "steps"}, "sweep grid");
    start = number_or(s, "start", start);
    stop = number_or(s, "stop", stop);
    steps = int_or(s, "steps", steps);
  }
  if (!(std::isfinite(start) && std::isfinite(stop)) || stop < start) {
    throw ConfigError("sweep range must be finite with stop >= start");
  }
  if (steps < 2) throw ConfigError("sweep needs at least 2 steps");

  const std::string outcome_name = string_or(c, "outcome", "down");
  Spin outcome;
  if (outcome_name == "down") {
    outcome = Spin::Down;
  } else if (outcome_name == "up") {
    outcome = Spin::Up;
  } else {
    throw ConfigError("\"outcome\" must be down or up");
  }

  const FockSpace space{resolve_cutoff(c, alpha)};
  const DispersiveModel model{beta, space};
  const double t = resolve_time(c, model, "pattern", nullptr);

  std::vector<std::string> rows(static_cast<std::size_t>(steps));
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> failures(
      std::max(1u, std::thread::hardware_concurrency()));

  auto worker = [&](unsigned id) {
    try {
      for (;;) {
        const long k = next.fetch_add(1);
        if (k >= steps) break;
        const double phi = start + double(k) * (stop - start) / double(steps - 1);
        const ABPhase phase{phi};
        const double numeric =
            numeric_projection_probability(phase, alpha, model, t, outcome);
        std::string pattern_cell;
        std::string discrepancy_cell;
        std::string flag = "ok";
        try {
          const double pattern = closed_form_projection_pattern(phase);
          pattern_cell = fmt(pattern);
          discrepancy_cell = fmt(std::abs(pattern - numeric));
        } catch (const DomainError&) {
          flag = "divergent";
        }
        rows[static_cast<std::size_t>(k)] = fmt(phi) + "," + pattern_cell + "," +
                                            fmt(numeric) + "," + discrepancy_cell +
                                            "," + flag + "\n";
      }
    } catch (...) {
      failures[id] = std::current_exception();
    }
  };

  const unsigned n_threads =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker, i);
  worker(0);
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& err : failures) {
    if (err) std::rethrow_exception(err);
  }

  std::string text = "phi_ab,pattern_closed_form,numeric_probability,discrepancy,flag\n";
  for (const std::string& row : rows) text += row;
  write_output(c, text);
  return 0;
}

// ---------------------------------------------------------------------------
// encode / decode / storage

int cmd_encode(const json& c) {
  check_keys(c, {"bits", "default_phase", "out", "format"}, "encode config");
  if (!c.contains("bits") || !c["bits"].is_string()) {
    throw ConfigError("missing \"bits\" string");
  }
  const std::string bits = c["bits"].get<std::string>();
  validate_bits(bits);
  const ABPhase mark{number_or(c, "default_phase", kPi)};
  if (bit_of_phase(mark) != 1) {
    throw ConfigError("\"default_phase\" is indistinguishable from no phase");
  }
  resolve_format(c, "json", {"json"});
  write_output(c, sequence_to_json(encode_string(bits, mark)));
  return 0;
}

PhaseSequence sequence_from_config(const json& c) {
  const bool has_input = c.contains("input");
  const bool has_inline = c.contains("phases");
  if (has_input == has_inline) {
    throw ConfigError("provide exactly one of \"input\" or \"phases\"");
  }
  std::string text;
  if (has_input) {
    const std::string path = string_or(c, "input", "");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    json doc;
    doc["phases"] = c["phases"];
    text = doc.dump();
  }
  try {
    return sequence_from_json(text);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

int cmd_decode(const json& c) {
  check_keys(c, {"input", "phases", "out", "format"}, "decode config");
  const PhaseSequence seq = sequence_from_config(c);
  const std::string bits = decode_sequence(seq);
  const std::string format = resolve_format(c, "txt", {"txt", "json"});
  if (format == "json") {
    json doc;
    doc["bits"] = bits;
    write_output(c, doc.dump(2) + "\n");
  } else {
    write_output(c, bits + "\n");
  }
  return 0;
}

int cmd_storage(const json& c) {
  check_keys(c, {"bits", "default_phase", "input", "omega", "periods", "basis", "alpha",
                 "out", "format"},
             "storage config");
  resolve_format(c, "csv", {"csv"});

  EncodedRegister reg;
  if (c.contains("input")) {
    const std::string path = string_or(c, "input", "");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      reg = register_from_json(ss.str());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  } else {
    if (!c.contains("bits") || !c["bits"].is_string()) {
      throw ConfigError("missing \"bits\" string or \"input\" register file");
    }
    const std::string bits = c["bits"].get<std::string>();
    validate_bits(bits);
    const ABPhase mark{number_or(c, "default_phase", kPi)};
    if (bit_of_phase(mark) != 1) {
      throw ConfigError("\"default_phase\" is indistinguishable from no phase");
    }
    const std::string basis_name = string_or(c, "basis", "abstract");
    RegisterBasis basis;
    if (basis_name == "abstract") {
      basis = RegisterBasis::Abstract;
    } else if (basis_name == "cat") {
      basis = RegisterBasis::Cat;
    } else {
      throw ConfigError("\"basis\" must be abstract or cat");
    }
    Complex alpha = 0.0;
    if (c.contains("alpha")) alpha = complex_of(c["alpha"], "alpha");
    if (basis == RegisterBasis::Cat && alpha == Complex(0.0)) {
      throw ConfigError("cat basis needs a nonzero \"alpha\"");
    }
    reg = build_register(encode_string(bits, mark), basis, alpha);
  }

  const double omega = need_number(c, "omega");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw ConfigError("\"omega\" must be > 0");
  const long periods = int_or(c, "periods", 3);
  if (periods < 0) throw ConfigError("\"periods\" must be >= 0");

  std::string text = "m,t,fidelity\n";
  for (long m = 0; m <= periods; ++m) {
    const double t = 2.0 * kPi * double(m) / omega;
    const double f = register_fidelity(reg, storage_evolve(reg, omega, t));
    text += std::to_string(m) + "," + fmt(t) + "," + fmt(f) + "\n";
  }
  write_output(c, text);
  return 0;
}

// ---------------------------------------------------------------------------
// dissipate

LindbladParams lindblad_from_config(const json& c, bool require) {
  LindbladParams params;
  params.kappa = 1.0;
  params.n_bar = 0.5;
  params.gamma = 0.1;
  params.lambda0_init = 1.0;
  params.n_alpha = 1;
  params.omega_T = 0.0;
  params.alpha = Complex(2.0, 0.0);
  if (!c.contains("lindblad")) {
    if (require) throw ConfigError("missing \"lindblad\" parameter object");
    return params;
  }
  const json& l = c["lindblad"];
  if (!l.is_object()) throw ConfigError("\"lindblad\" must be an object");
  check_keys(l, {"kappa", "n_bar", "gamma", "lambda0_init", "n_alpha", "omega_T", "alpha"},
             "lindblad parameters");
  params.kappa = number_or(l, "kappa", params.kappa);
  params.n_bar = number_or(l, "n_bar", params.n_bar);
  params.gamma = number_or(l, "gamma", params.gamma);
  params.lambda0_init = number_or(l, "lambda0_init", params.lambda0_init);
  params.n_alpha = static_cast<int>(int_or(l, "n_alpha", params.n_alpha));
  params.omega_T = number_or(l, "omega_T", params.omega_T);
  if (l.contains("alpha")) params.alpha = complex_of(l["alpha"], "alpha");
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return params;
}

std::string dissipate_trajectory(const LindbladParams& params, const ABPhase& phase,
                                 double beta, int cutoff, double t_max, long steps,
                                 DissipatorVariant variant) {
  std::string text;
  if (!params.low_temperature()) {
    text += "# warning: n_bar exceeds the low-temperature regime (n_bar <= 1e-3)\n";
  }
  if (!params.number_state_regime()) {
    text += "# warning: outside the number-state regime |alpha| > n_alpha >= 1\n";
  }
  if (params.growth_regime()) {
    text += "# warning: |alpha|^2 < n_alpha^2: the scalar amplitude grows\n";
  }
  if (params.n_bar == 0.0) {
    text += "# note: n_bar = 0 implies kappa2 = 0; the thermal channel is off\n";
  }
  text += "t,lambda0_ode,lambda0_closed,trace,hermiticity_residual,ab_block_phase\n";

  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (long k = 0; k < steps; ++k) {
    grid[static_cast<std::size_t>(k)] = t_max * double(k) / double(steps - 1);
  }
  const std::vector<double> lambda_ode = lambda0_ode_solve(params, grid);

  const FockSpace space{cutoff};
  const DispersiveModel model{beta, space};
  DensityOperator rho = ansatz_density(0.0, phase, params, model);
  const double tr0 = rho.trace().real();
  if (tr0 <= 0.0) throw Error("ansatz density has nonpositive trace");
  rho.matrix /= tr0;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k > 0) {
      rho = evolve_density_numeric(rho, params, grid[k] - grid[k - 1], variant);
    }
    const double trace = rho.trace().real();
    const double herm = rho.hermiticity_residual();
    if (variant == DissipatorVariant::Standard && std::abs(trace - 1.0) > 1e-6) {
      throw Error("trace drifted during density evolution");
    }
    if (herm > 1e-6) throw Error("hermiticity lost during density evolution");
    text += fmt(grid[k]) + "," + fmt(lambda_ode[k]) + "," +
            fmt(lambda0_closed_form(params, grid[k])) + "," + fmt(trace) + "," +
            fmt(herm) + "," + fmt(ab_block_phase(rho)) + "\n";
  }
  return text;
}

int cmd_dissipate(const json& c) {
  check_keys(c, {"lindblad", "phi_ab", "beta", "t_max", "steps", "variant", "family",
                 "cutoff", "out", "format"},
             "dissipate config");
  resolve_format(c, "csv", {"csv"});
  LindbladParams params = lindblad_from_config(c, false);
  if (std::abs(params.alpha) == 0.0) throw ConfigError("\"alpha\" must be nonzero");

  const ABPhase phase{number_or(c, "phi_ab", 0.5 * kPi)};
  const double beta = number_or(c, "beta", 1.0);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("\"beta\" must be > 0");
  const int cutoff = resolve_cutoff(c, params.alpha);

  double t_max_default = 1.0;
  const double rate = params.g_decay_rate();
  if (rate > 0.0 && std::isfinite(5.0 / (4.0 * rate))) t_max_default = 5.0 / (4.0 * rate);
  const double t_max = number_or(c, "t_max", t_max_default);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("\"t_max\" must be > 0");
  const long steps = int_or(c, "steps", 26);
  if (steps < 2) throw ConfigError("\"steps\" must be at least 2");

  const std::string variant_name = string_or(c, "variant", "standard");
  DissipatorVariant variant;
  if (variant_name == "standard") {
    variant = DissipatorVariant::Standard;
  } else if (variant_name == "reduced") {
    variant = DissipatorVariant::Reduced;
  } else {
    throw ConfigError("\"variant\" must be standard or reduced");
  }

  if (!bool_or(c, "family", false)) {
    write_output(c, dissipate_trajectory(params, phase, beta, cutoff, t_max, steps,
                                         variant));
    return 0;
  }

  // Family mode: the scalar-amplitude curves over a small grid of initial values
  // and dissipation coefficients, one file per combination.
  const std::string base = string_or(c, "out", "");
  if (base.empty()) throw ConfigError("family mode needs \"out\"");
  const std::string stem =
      base.size() > 4 && base.substr(base.size() - 4) == ".csv"
          ? base.substr(0, base.size() - 4)
          : base;
  for (double lambda0 : {0.5, 1.0, 2.0}) {
    for (double gamma : {0.1, 1.0}) {
      LindbladParams member = params;
      member.lambda0_init = lambda0;
      member.gamma = gamma;
      const std::string text =
          dissipate_trajectory(member, phase, beta, cutoff, t_max, steps, variant);
      json out_override;
      out_override["out"] =
          stem + "_lambda0_" + fmt(lambda0) + "_gamma_" + fmt(gamma) + ".csv";
      write_output(out_override, text);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report

double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * (double(gen() >> 11) * 0x1.0p-53) - 1.0;
}

int cmd_report(const json& c, std::uint64_t seed) {
  check_keys(c, {"alpha", "beta", "cutoff", "lindblad", "out", "format"}, "report config");
  resolve_format(c, "json", {"json"});
  const Complex alpha =
      c.contains("alpha") ? complex_of(c["alpha"], "alpha") : Complex(2.0, 0.0);
  const double beta = number_or(c, "beta", 1.0);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("\"beta\" must be > 0");
  const FockSpace space{resolve_cutoff(c, alpha)};
  const DispersiveModel model{beta, space};
  const LindbladParams params = lindblad_from_config(c, false);

  json doc;

  {  // Closed-form projection pattern vs the pipeline probability.
    const double t = pattern_time(model);
    const long steps = 101;
    double max_abs = 0.0;
    double sum_abs = 0.0;
    long counted = 0;
    long divergent = 0;
    for (long k = 0; k < steps; ++k) {
      const double phi = 2.0 * kPi * double(k) / double(steps - 1);
      const ABPhase phase{phi};
      const double numeric =
          numeric_projection_probability(phase, alpha, model, t, Spin::Down);
      try {
        const double pattern = closed_form_projection_pattern(phase);
        const double diff = std::abs(pattern - numeric);
        max_abs = std::max(max_abs, diff);
        sum_abs += diff;
        ++counted;
      } catch (const DomainError&) {
        ++divergent;
      }
    }
    json section;
    section["grid_points"] = steps;
    section["divergent_points"] = divergent;
    section["max_abs_discrepancy"] = max_abs;
    section["mean_abs_discrepancy"] = counted > 0 ? sum_abs / double(counted) : 0.0;
    section["closed_form_at_pi"] = closed_form_projection_pattern(ABPhase{kPi});
    section["numeric_at_pi"] =
        numeric_projection_probability(ABPhase{kPi}, alpha, model, t, Spin::Down);
    section["note"] =
        "the closed-form pattern and the pipeline probability disagree away from "
        "phi_ab = pi; both columns are reported by the sweep command";
    doc["pattern_vs_numeric"] = section;
  }

  {  // Scalar-amplitude closed form vs the integrated equation.
    const double rate = params.g_decay_rate();
    const double t_max = rate > 0.0 ? 5.0 / (4.0 * rate) : 1.0;
    const long steps = 51;
    std::vector<double> grid(steps);
    for (long k = 0; k < steps; ++k) grid[k] = t_max * double(k) / double(steps - 1);
    const std::vector<double> ode = lambda0_ode_solve(params, grid);
    double max_rel = 0.0;
    for (long k = 0; k < steps; ++k) {
      const double closed = lambda0_closed_form(params, grid[k]);
      max_rel = std::max(max_rel,
                         std::abs(ode[k] - closed) / std::max(std::abs(ode[k]), 1e-300));
    }
    json residuals = json::array();
    for (double t : {0.0, 0.5 * t_max, t_max}) {
      json entry;
      entry["t"] = t;
      entry["residual"] = closed_form_ode_residual(params, t);
      residuals.push_back(entry);
    }
    json section;
    section["t_max"] = t_max;
    section["grid_points"] = steps;
    section["max_rel_deviation"] = max_rel;
    section["ode_residual_of_closed_form"] = residuals;
    section["note"] =
        "the closed form decays four times faster than the governing scalar "
        "equation implies; the residual of substituting it into that equation is "
        "reported";
    doc["lambda0_closed_vs_ode"] = section;
  }

  {  // Standard vs reduced channel action on a seeded positive test state.
    const int n = 12;
    std::mt19937_64 gen(seed);
    Mat a(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
      for (int j = 0; j < 2 * n; ++j) {
        a(i, j) = Complex(uniform_pm1(gen), uniform_pm1(gen));
      }
    }
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    const DensityOperator state{rho};
    const DensityOperator std_rhs = lindblad_rhs(state, params, DissipatorVariant::Standard);
    const DensityOperator red_rhs = lindblad_rhs(state, params, DissipatorVariant::Reduced);
    json section;
    section["seed"] = seed;
    section["state"] = "seeded random positive operator, unit trace, cutoff 12";
    section["max_entry_difference"] =
        (std_rhs.matrix - red_rhs.matrix).cwiseAbs().maxCoeff();
    section["standard_rhs_trace"] = std_rhs.trace().real();
    section["reduced_rhs_trace"] = red_rhs.trace().real();
    section["note"] =
        "the reduced channel replaces the anticommutator by a scalar |alpha|^2 "
        "subtraction, so it is faithful only near coherent states of radius |alpha|";
    doc["dissipator_variants"] = section;
  }

  {  // Gate non-unitarity shrinks with the coherent overlap.
    json table = json::array();
    for (double a : {1.0, 2.0, 3.0}) {
      const FockSpace gate_space = FockSpace::for_amplitude(Complex(a, 0.0));
      const HadamardCatGate gate = hadamard_cat_gate(Complex(a, 0.0), gate_space);
      json entry;
      entry["alpha"] = a;
      entry["overlap"] = std::exp(-2.0 * a * a);
      entry["unitarity_deviation"] =
          gate_unitarity_deviation(gate, Complex(a, 0.0), gate_space);
      table.push_back(entry);
    }
    doc["gate_unitarity"] = table;
  }

  {  // Mixing-angle singular sector.
    json section;
    try {
      one_qubit_coefficients(ABPhase{kPi});
      section["detected"] = false;
    } catch (const DomainError& e) {
      section["detected"] = true;
      section["message"] = e.what();
    }
    section["note"] =
        "the arctangent mixing angles take purely imaginary arguments and blow up "
        "near phi_ab = pi/2 and 3*pi/2; the coefficient pair stays finite";
    doc["mixing_angle_singularity"] = section;
  }

  write_output(c, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{
      "Aharonov-Bohm phase transfer toolkit: dispersive spin-field simulation,\n"
      "cat-state readout, bit/qudit phase encoding, and thermal-bath dynamics.\n"
      "Natural units with hbar = 1: beta and omega carry inverse time, t time."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format;
  long cutoff = 0;
  std::uint64_t seed = 12345;
  app.add_option("--config", config_path, "JSON parameter document");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_option("--format", format, "output format override (csv or json)");
  app.add_option("--cutoff", cutoff, "photon-number truncation override");
  app.add_option("--seed", seed, "seed for the randomized report checks");

  CLI::App* sub_transfer = app.add_subcommand(
      "transfer", "run the transfer pipeline and report per-branch cat fidelities");
  CLI::App* sub_sweep = app.add_subcommand(
      "sweep", "tabulate the projection pattern against the numeric probability");
  CLI::App* sub_encode =
      app.add_subcommand("encode", "map a bit string to a phase sequence");
  CLI::App* sub_decode =
      app.add_subcommand("decode", "map a phase sequence back to bits");
  CLI::App* sub_storage = app.add_subcommand(
      "storage", "check register fidelity over whole storage periods");
  CLI::App* sub_dissipate = app.add_subcommand(
      "dissipate", "integrate the thermal-bath dynamics and tabulate the trajectory");
  CLI::App* sub_report = app.add_subcommand(
      "report", "summarize closed-form vs numeric discrepancies as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    json cfg = load_config(config_path);
    if (!out_path.empty()) cfg["out"] = out_path;
    if (!format.empty()) cfg["format"] = format;
    if (cutoff != 0) cfg["cutoff"] = cutoff;

    if (sub_transfer->parsed()) return cmd_transfer(cfg);
    if (sub_sweep->parsed()) return cmd_sweep(cfg);
    if (sub_encode->parsed()) return cmd_encode(cfg);
    if (sub_decode->parsed()) return cmd_decode(cfg);
    if (sub_storage->parsed()) return cmd_storage(cfg);
    if (sub_dissipate->parsed()) return cmd_dissipate(cfg);
    if (sub_report->parsed()) return cmd_report(cfg, seed);
    throw ConfigError("no subcommand selected");
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace abt::cli
