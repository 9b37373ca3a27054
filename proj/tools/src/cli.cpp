#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace map2fit::cli {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  for (char &ch : s)
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  double value = 0.0;
  const char *end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw UsageError(std::string(what) + ": not a finite number: '" + t + "'");
  return value;
}

long long parse_integer(std::string_view text, std::string_view what) {
  const std::string t = trim(text);
  long long value = 0;
  const char *end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc{} || ptr != end)
    throw UsageError(std::string(what) + ": not an integer: '" + t + "'");
  return value;
}

// Ordered key = value pairs with '#' comments; duplicate keys rejected.
std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    std::string_view what) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(std::string(what) + " line " + std::to_string(number) +
                       ": expected key = value");
    const std::string key = lower(trim(std::string_view(line).substr(0, eq)));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw UsageError(std::string(what) + " line " + std::to_string(number) +
                       ": empty key");
    if (!out.emplace(key, value).second)
      throw UsageError(std::string(what) + ": duplicate key '" + key + "'");
  }
  return out;
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Matrix2 parse_matrix(const std::string &value, std::string_view key) {
  std::vector<double> entries;
  std::istringstream in(value);
  std::string item;
  while (std::getline(in, item, ','))
    entries.push_back(parse_double(item, key));
  if (entries.size() != 4)
    throw UsageError(std::string(key) + ": expected 4 comma-separated entries");
  return {entries[0], entries[1], entries[2], entries[3]};
}

json matrix_json(const Matrix2 &m) {
  return json::array({json::array({m.a11, m.a12}), json::array({m.a21, m.a22})});
}

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
public:
  Sink(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_)
        throw UsageError("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream &operator*() { return *stream_; }

private:
  std::ofstream file_;
  std::ostream *stream_;
};

struct Options {
  std::vector<std::string> models;
  std::string sample;
  std::string out;
  std::string config_path;
  std::string form = "both";
  std::string representation = "canonical";
  std::optional<std::size_t> n;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<double> tau;

  std::uint64_t seed_or_default() const { return seed.value_or(0); }
  std::optional<int> multistarts;
};

EstimationConfig build_config(const Options &o) {
  EstimationConfig config;
  if (!o.config_path.empty())
    apply_config(config, read_text(o.config_path));
  if (o.tau)
    config.tau = *o.tau;
  if (o.multistarts)
    config.multistart_count = *o.multistarts;
  if (o.seed)
    config.seed = *o.seed;
  config.validate();
  return config;
}

int cmd_simulate(const Options &o, std::ostream &out) {
  if (o.models.size() != 1)
    throw UsageError("simulate needs exactly one --model");
  if (!o.n || *o.n == 0)
    throw UsageError("simulate needs --n >= 1");
  const ModelSpec spec = read_model_spec(o.models[0]);
  const InterarrivalSample s =
      simulate(spec.matrices, *o.n, SimulationStart::stationary(), o.seed_or_default());
  Sink sink(o.out, out);
  *sink << "# map2fit simulate model=" << (spec.label.empty() ? o.models[0] : spec.label)
        << " n=" << *o.n << " seed=" << o.seed_or_default() << "\n";
  *sink << std::setprecision(17);
  for (double t : s.times)
    *sink << t << "\n";
  return exit_ok;
}

void print_row(std::ostream &out, std::string_view name, std::optional<double> value) {
  out << std::left << std::setw(6) << name << " ";
  if (value)
    out << std::setprecision(10) << *value;
  else
    out << "undefined";
  out << "\n";
}

int cmd_moments(const Options &o, std::ostream &out) {
  if (o.models.size() + (o.sample.empty() ? 0 : 1) != 1)
    throw UsageError("moments needs exactly one of --model or --sample");
  Sink sink(o.out, out);
  if (!o.sample.empty()) {
    const std::vector<double> t = read_sample(o.sample);
    validate_sample(t, 2);
    const auto raw = raw_sample_moments(t);
    *sink << "# sample " << o.sample << " n=" << t.size() << "\n";
    print_row(*sink, "rho1", sample_autocorrelation(t, 1));
    print_row(*sink, "mu1", raw[0]);
    print_row(*sink, "mu2", raw[1]);
    print_row(*sink, "mu3", raw[2]);
    return exit_ok;
  }
  const ModelSpec spec = read_model_spec(o.models[0]);
  const RateMatrixPair &m = spec.matrices;
  *sink << "# model " << (spec.label.empty() ? o.models[0] : spec.label) << "\n";
  print_row(*sink, "rho1", autocorrelation(m, 1));
  print_row(*sink, "mu1", moment(m, 1));
  print_row(*sink, "mu2", moment(m, 2));
  print_row(*sink, "mu3", moment(m, 3));
  print_row(*sink, "gamma", gamma(m));
  *sink << std::left << std::setw(6) << "form" << " " << to_string(classify_form(m)) << "\n";
  return exit_ok;
}

int cmd_fit(const Options &o, std::ostream &out) {
  if (o.sample.empty())
    throw UsageError("fit needs --sample");
  if (o.models.size() > 1)
    throw UsageError("fit takes at most one reference --model");
  const std::vector<double> t = read_sample(o.sample);
  validate_sample(t, 2);
  const EstimationConfig config = build_config(o);
  const std::string representation = lower(o.representation);
  const std::string form_choice = lower(o.form);
  std::optional<Form> only;
  if (form_choice != "both") {
    only = parse_form(form_choice);
    if (!only)
      throw UsageError("--form must be one, two or both");
  }

  const auto started = std::chrono::steady_clock::now();
  json report;
  report["schema"] = "map2fit.fit_report";
  report["schema_version"] = 1;
  const SampleScale scale = sample_scale(t);
  report["input"] = {{"file", o.sample},
                     {"n", t.size()},
                     {"moments", to_json(matching_target(t))},
                     {"scale", scale.c},
                     {"zero_variance_fallback", scale.zero_variance_fallback}};
  report["representation"] = representation;

  FitResult best;
  if (representation == "canonical") {
    json forms = json::object();
    if (only) {
      best = fit_form(t, *only, config);
      forms[std::string(to_string(*only))] = to_json(best);
    } else {
      const FormFits fits = fit_both_forms(t, config);
      forms["one"] = to_json(fits.form_one);
      forms["two"] = to_json(fits.form_two);
      best = fits.best();
    }
    report["forms"] = forms;
    report["selected_form"] = to_string(best.form_selected);
  } else if (representation == "redundant") {
    if (only)
      throw UsageError("--form applies to the canonical representation only");
    best = ml_fit_redundant(t, config);
    report["forms"] = json::object();
    report["selected_form"] = to_string(classify_form(best.matrices()));
  } else {
    throw UsageError("--representation must be canonical or redundant");
  }

  report["fit"] = to_json(best);
  report["model"] = representations(best.matrices());
  report["loglik"] = best.loglik.value;
  report["start_loglik"] = best.start_loglik.value;
  report["improvement"] = best.loglik.value - best.start_loglik.value;

  if (!o.models.empty()) {
    const ModelSpec ref = read_model_spec(o.models[0]);
    const std::size_t n = o.n.value_or(t.size());
    const std::size_t runs = o.runs.value_or(20);
    const std::uint64_t kl_seed = derive_seed(config.seed, Stream::Divergence, 0);
    report["kl_reference"] = {
        {"reference", ref.label.empty() ? o.models[0] : ref.label},
        {"fit", to_json(empirical_kl(ref.matrices, best.matrices(), n, runs, kl_seed))},
        {"start",
         to_json(empirical_kl(ref.matrices, to_matrices(best.start_model), n, runs, kl_seed))}};
  } else {
    report["kl_reference"] = nullptr;
  }
  report["config"] = to_json(config);
  report["seed"] = config.seed;
  report["timing"] = {
      {"seconds",
       std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};

  Sink sink(o.out, out);
  *sink << report.dump(2) << "\n";
  return exit_ok;
}

int cmd_kl(const Options &o, std::ostream &out) {
  if (o.models.size() != 2)
    throw UsageError("kl needs exactly two --model files (truth first)");
  const ModelSpec a = read_model_spec(o.models[0]);
  const ModelSpec b = read_model_spec(o.models[1]);
  const KlEstimate k =
      empirical_kl(a.matrices, b.matrices, o.n.value_or(500), o.runs.value_or(20), o.seed_or_default());
  json j = to_json(k);
  j["truth"] = a.label.empty() ? o.models[0] : a.label;
  j["candidate"] = b.label.empty() ? o.models[1] : b.label;
  j["seed"] = o.seed_or_default();
  Sink sink(o.out, out);
  *sink << j.dump(2) << "\n";
  return exit_ok;
}

int cmd_scan(const Options &o, std::ostream &out) {
  const std::size_t count = o.count.value_or(100);
  Sink sink(o.out, out);
  *sink << "# map2fit scan count=" << count << " seed=" << o.seed_or_default() << "\n";
  *sink << "index,form,x,y,u,v,mean,variance\n" << std::setprecision(12);
  for (std::size_t i = 0; i < count; ++i) {
    const CanonicalMap2 c = random_canonical(derive_seed(o.seed_or_default(), Stream::Scan, i), {});
    const RateMatrixPair m = canonical_to_matrices(c);
    const double mu1 = moment(m, 1);
    *sink << i << "," << to_string(c.form) << "," << c.x << "," << c.y << "," << c.u << ","
          << c.v << "," << mu1 << "," << moment(m, 2) - mu1 * mu1 << "\n";
  }
  return exit_ok;
}

std::string csv_optional(const std::optional<double> &v) {
  if (!v)
    return "";
  std::ostringstream s;
  s << std::setprecision(12) << *v;
  return s.str();
}

std::string csv_text(std::string text) {
  for (char &ch : text)
    if (ch == '"' || ch == '\n' || ch == '\r')
      ch = '\'';
  return "\"" + text + "\"";
}

int cmd_compare(const Options &o, std::ostream &out) {
  ComparisonOptions options;
  options.count = o.count.value_or(30);
  options.n = o.n.value_or(500);
  options.kl_runs = o.runs.value_or(20);
  options.config = build_config(o);
  options.seed = options.config.seed;
  const auto rows = compare_representations(options);

  Sink sink(o.out, out);
  *sink << "# map2fit compare-reps count=" << options.count << " n=" << options.n
        << " kl_runs=" << options.kl_runs << " seed=" << options.seed << "\n";
  *sink << "index,lambda1,lambda2,p120,p111,p210,p211,kl_canonical,kl_redundant,ratio,"
           "canonical_failed,redundant_failed,note\n";
  std::size_t redundant_failures = 0, canonical_failures = 0;
  for (const ComparisonRow &r : rows) {
    redundant_failures += r.redundant_failed();
    canonical_failures += r.canonical_failed();
    std::ostringstream line;
    line << std::setprecision(12) << r.index << "," << r.truth.lambda1 << ","
         << r.truth.lambda2 << "," << r.truth.p120 << "," << r.truth.p111 << ","
         << r.truth.p210 << "," << r.truth.p211 << "," << csv_optional(r.kl_canonical) << ","
         << csv_optional(r.kl_redundant) << "," << csv_optional(r.ratio) << ","
         << r.canonical_failed() << "," << r.redundant_failed() << ","
         << csv_text(r.redundant_failure.empty() ? r.canonical_failure
                                                 : r.redundant_failure);
    *sink << line.str() << "\n";
  }
  const auto median = median_ratio(rows);
  *sink << "# median_ratio=" << csv_optional(median)
        << " redundant_failures=" << redundant_failures
        << " canonical_failures=" << canonical_failures << "\n";
  return exit_ok;
}

} // namespace

ModelSpec parse_model_spec(std::string_view text) {
  auto kv = parse_key_values(text, "model spec");
  ModelSpec spec;
  if (auto it = kv.find("label"); it != kv.end()) {
    spec.label = it->second;
    kv.erase(it);
  }
  std::string representation;
  if (auto it = kv.find("representation"); it != kv.end()) {
    representation = lower(it->second);
    kv.erase(it);
  } else if (kv.count("d0")) {
    representation = "matrices";
  } else if (kv.count("lambda1")) {
    representation = "redundant";
  } else if (kv.count("x")) {
    representation = "canonical";
  } else {
    throw UsageError("model spec: missing representation");
  }

  auto take = [&](const std::string &key) {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw UsageError("model spec: missing key '" + key + "'");
    std::string value = it->second;
    kv.erase(it);
    return value;
  };
  auto number = [&](const std::string &key) { return parse_double(take(key), key); };

  if (representation == "canonical") {
    spec.kind = SpecKind::Canonical;
    CanonicalMap2 c;
    const auto form = parse_form(take("form"));
    if (!form)
      throw UsageError("model spec: form must be one or two");
    c.form = *form;
    c.x = number("x");
    c.y = number("y");
    c.u = number("u");
    c.v = number("v");
    spec.matrices = canonical_to_matrices(c);
    spec.canonical = c;
  } else if (representation == "redundant") {
    spec.kind = SpecKind::Redundant;
    RedundantMap2 r;
    r.lambda1 = number("lambda1");
    r.lambda2 = number("lambda2");
    r.p120 = number("p120");
    r.p111 = number("p111");
    r.p210 = number("p210");
    r.p211 = number("p211");
    spec.matrices = redundant_to_matrices(r);
    spec.redundant = r;
  } else if (representation == "matrices") {
    spec.kind = SpecKind::Matrices;
    spec.matrices = {parse_matrix(take("d0"), "d0"), parse_matrix(take("d1"), "d1")};
    spec.matrices.validate();
  } else {
    throw UsageError("model spec: unknown representation '" + representation + "'");
  }
  if (!kv.empty())
    throw UsageError("model spec: unexpected key '" + kv.begin()->first + "'");
  return spec;
}

ModelSpec read_model_spec(const std::filesystem::path &path) {
  return parse_model_spec(read_text(path));
}

std::string format_model_spec(const ModelSpec &spec) {
  std::ostringstream out;
  out << std::setprecision(17);
  if (!spec.label.empty())
    out << "label = " << spec.label << "\n";
  if (spec.kind == SpecKind::Canonical && spec.canonical) {
    const CanonicalMap2 &c = *spec.canonical;
    out << "representation = canonical\nform = " << to_string(c.form) << "\nx = " << c.x
        << "\ny = " << c.y << "\nu = " << c.u << "\nv = " << c.v << "\n";
  } else if (spec.kind == SpecKind::Redundant && spec.redundant) {
    const RedundantMap2 &r = *spec.redundant;
    out << "representation = redundant\nlambda1 = " << r.lambda1 << "\nlambda2 = " << r.lambda2
        << "\np120 = " << r.p120 << "\np111 = " << r.p111 << "\np210 = " << r.p210
        << "\np211 = " << r.p211 << "\n";
  } else {
    const RateMatrixPair &m = spec.matrices;
    out << "representation = matrices\nd0 = " << m.d0.a11 << ", " << m.d0.a12 << ", "
        << m.d0.a21 << ", " << m.d0.a22 << "\nd1 = " << m.d1.a11 << ", " << m.d1.a12
        << ", " << m.d1.a21 << ", " << m.d1.a22 << "\n";
  }
  return out.str();
}

std::vector<double> parse_sample(std::string_view text) {
  std::vector<double> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::string value = trim(line);
    // Tolerate a trailing separator from spreadsheet exports.
    if (!value.empty() && value.back() == ',')
      value.pop_back();
    if (value.empty())
      continue;
    const double t = parse_double(value, "sample line " + std::to_string(number));
    if (!(t > 0.0))
      throw UsageError("sample line " + std::to_string(number) +
                       ": interarrival times must be positive");
    out.push_back(t);
  }
  if (out.empty())
    throw UsageError("sample is empty");
  return out;
}

std::vector<double> read_sample(const std::filesystem::path &path) {
  return parse_sample(read_text(path));
}

void apply_config(EstimationConfig &config, std::string_view text) {
  for (const auto &[key, value] : parse_key_values(text, "config")) {
    if (key == "tau")
      config.tau = parse_double(value, key);
    else if (key == "rate_lower")
      config.rate_bounds.lower = parse_double(value, key);
    else if (key == "rate_upper")
      config.rate_bounds.upper = parse_double(value, key);
    else if (key == "jump_lower")
      config.jump_bounds.lower = parse_double(value, key);
    else if (key == "jump_upper")
      config.jump_bounds.upper = parse_double(value, key);
    else if (key == "multistarts")
      config.multistart_count = static_cast<int>(parse_integer(value, key));
    else if (key == "seed")
      config.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    else if (key == "step_tolerance")
      config.optimizer.step_tolerance = parse_double(value, key);
    else if (key == "objective_tolerance")
      config.optimizer.objective_tolerance = parse_double(value, key);
    else if (key == "max_iterations")
      config.optimizer.max_iterations = static_cast<int>(parse_integer(value, key));
    else if (key == "initial_step")
      config.optimizer.initial_step = parse_double(value, key);
    else if (key == "restarts")
      config.optimizer.restarts = static_cast<int>(parse_integer(value, key));
    else
      throw UsageError("config: unknown key '" + key + "'");
  }
}

json to_json(const MomentSummary &m) {
  auto finite = [](double v) -> json {
    if (std::isfinite(v))
      return v;
    return nullptr;
  };
  return {{"mu1", finite(m.mu1)},
          {"mu2", finite(m.mu2)},
          {"mu3", finite(m.mu3)},
          {"rho1", finite(m.rho1)}};
}

json to_json(const CanonicalMap2 &c) {
  return {{"form", to_string(c.form)}, {"x", c.x}, {"y", c.y}, {"u", c.u}, {"v", c.v}};
}

json to_json(const RedundantMap2 &r) {
  return {{"lambda1", r.lambda1}, {"lambda2", r.lambda2}, {"p120", r.p120},
          {"p111", r.p111},       {"p210", r.p210},       {"p211", r.p211}};
}

json to_json(const RateMatrixPair &m) {
  return {{"d0", matrix_json(m.d0)}, {"d1", matrix_json(m.d1)}};
}

json to_json(const LogLikelihood &ll) {
  return {{"value", ll.value},
          {"n", ll.n},
          {"scale_used", ll.scale_used},
          {"zero_variance_fallback", ll.zero_variance_fallback}};
}

json to_json(const KlEstimate &k) {
  return {{"value", k.value},
          {"n", k.n},
          {"runs", k.runs},
          {"std_error", k.std_error},
          {"degenerate_runs", k.degenerate_runs}};
}

json to_json(const FitResult &f) {
  auto model = [](const FittedModel &m) {
    return std::visit([](const auto &v) { return to_json(v); }, m);
  };
  return {{"representation", to_string(f.representation)},
          {"form_selected", to_string(f.form_selected)},
          {"model", model(f.model)},
          {"matrices", to_json(f.matrices())},
          {"loglik", to_json(f.loglik)},
          {"start_model", model(f.start_model)},
          {"start_loglik", to_json(f.start_loglik)},
          {"moments", to_json(f.moments)},
          {"iterations", f.iterations},
          {"converged", f.converged},
          {"start_bounds_active", f.start_bounds_active},
          {"bounds_active", f.bounds_active}};
}

json to_json(const EstimationConfig &c) {
  return {{"tau", c.tau},
          {"rate_bounds", {c.rate_bounds.lower, c.rate_bounds.upper}},
          {"jump_bounds", {c.jump_bounds.lower, c.jump_bounds.upper}},
          {"multistarts", c.multistart_count},
          {"seed", c.seed},
          {"optimizer",
           {{"step_tolerance", c.optimizer.step_tolerance},
            {"objective_tolerance", c.optimizer.objective_tolerance},
            {"max_iterations", c.optimizer.max_iterations},
            {"initial_step", c.optimizer.initial_step},
            {"restarts", c.optimizer.restarts}}}};
}

json representations(const RateMatrixPair &m) {
  json out;
  out["matrices"] = to_json(m);
  try {
    out["canonical"] = to_json(matrices_to_canonical(m));
  } catch (const Error &e) {
    out["canonical"] = nullptr;
    out["canonical_note"] = e.what();
  }
  try {
    out["redundant"] = to_json(matrices_to_redundant(m));
  } catch (const Error &e) {
    out["redundant"] = nullptr;
    out["redundant_note"] = e.what();
  }
  return out;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Simulate, analyze and fit two-state Markovian arrival processes"};
  app.name("map2fit");
  app.require_subcommand(1);
  Options o;

  auto model_flag = [&](CLI::App *cmd, bool many) {
    auto *opt = cmd->add_option("--model", o.models,
                                many ? "model spec file (repeat: truth, candidate)"
                                     : "model spec file");
    if (!many)
      opt->expected(1);
  };
  auto seed_flag = [&](CLI::App *cmd) {
    cmd->add_option("--seed", o.seed, "master seed (default 0)");
  };
  auto out_flag = [&](CLI::App *cmd) {
    cmd->add_option("--out", o.out, "output file (default stdout)");
  };
  auto estimation_flags = [&](CLI::App *cmd) {
    cmd->add_option("--tau", o.tau, "moments penalty weight");
    cmd->add_option("--multistarts", o.multistarts, "moments-matching starts");
    cmd->add_option("--config", o.config_path, "key = value estimation config");
  };

  CLI::App *sim = app.add_subcommand("simulate", "simulate interarrival times");
  model_flag(sim, false);
  sim->add_option("--n", o.n, "number of interarrival times")->required();
  seed_flag(sim);
  out_flag(sim);

  CLI::App *mom = app.add_subcommand("moments", "moments of a model or a sample");
  model_flag(mom, false);
  mom->add_option("--sample", o.sample, "sample CSV");
  out_flag(mom);

  CLI::App *fit_cmd = app.add_subcommand("fit", "maximum-likelihood fit of a sample");
  fit_cmd->add_option("--sample", o.sample, "sample CSV")->required();
  model_flag(fit_cmd, false);
  fit_cmd->add_option("--form", o.form, "one, two or both (default both)");
  fit_cmd->add_option("--representation", o.representation,
                      "canonical (default) or redundant");
  fit_cmd->add_option("--n", o.n, "sequence length for KL against --model");
  fit_cmd->add_option("--runs", o.runs, "KL runs against --model (default 20)");
  estimation_flags(fit_cmd);
  seed_flag(fit_cmd);
  out_flag(fit_cmd);

  CLI::App *kl = app.add_subcommand("kl", "empirical Kullback-Leibler divergence");
  model_flag(kl, true);
  kl->add_option("--n", o.n, "sequence length (default 500)");
  kl->add_option("--runs", o.runs, "Monte-Carlo runs (default 20)");
  seed_flag(kl);
  out_flag(kl);

  CLI::App *scan = app.add_subcommand("scan", "mean and variance of random models");
  scan->add_option("--count", o.count, "number of models (default 100)");
  seed_flag(scan);
  out_flag(scan);

  CLI::App *cmp = app.add_subcommand("compare-reps",
                                     "canonical versus redundant fits of random models");
  cmp->add_option("--count", o.count, "number of random models (default 30)");
  cmp->add_option("--n", o.n, "sample length (default 500)");
  cmp->add_option("--runs", o.runs, "KL runs per model (default 20)");
  estimation_flags(cmp);
  seed_flag(cmp);
  out_flag(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*sim)
      return cmd_simulate(o, out);
    if (*mom)
      return cmd_moments(o, out);
    if (*fit_cmd)
      return cmd_fit(o, out);
    if (*kl)
      return cmd_kl(o, out);
    if (*scan)
      return cmd_scan(o, out);
    return cmd_compare(o, out);
  } catch (const UsageError &e) {
    err << "map2fit: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error &e) {
    err << "map2fit: " << e.what() << "\n";
    return is_numerical(e.code()) ? exit_numerical : exit_usage;
  } catch (const std::exception &e) {
    err << "map2fit: " << e.what() << "\n";
    return exit_numerical;
  }
}

} // namespace map2fit::cli
