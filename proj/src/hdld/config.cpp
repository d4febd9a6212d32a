// SPDX-License-Identifier: Apache-2.0
#include "hdld/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hdld/error.hpp"

namespace hdld {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// One parsed section; take() marks keys consumed so leftovers can be reported.
class Section {
 public:
  explicit Section(std::string name) : name_(std::move(name)) {}

  void add(const std::string& key, const std::string& value, int line) {
    require(!entries_.count(key), Errc::config,
            "config: duplicate key '" + key + "' in [" + name_ + "] (line " +
                std::to_string(line) + ")");
    entries_[key] = value;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string take(const std::string& key) {
    auto it = entries_.find(key);
    require(it != entries_.end(), Errc::config,
            "config: missing key '" + key + "' in [" + name_ + "]");
    consumed_.insert(key);
    return it->second;
  }

  double take_real(const std::string& key) {
    std::string v = take(key);
    try {
      size_t pos = 0;
      double x = std::stod(v, &pos);
      require(pos == v.size(), Errc::config,
              "config: trailing characters in value for '" + key + "'");
      return x;
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::config, "config: '" + key + "' in [" + name_ + "] is not a number: " + v);
    }
  }

  std::int64_t take_int(const std::string& key) {
    std::string v = take(key);
    try {
      size_t pos = 0;
      long long x = std::stoll(v, &pos);
      require(pos == v.size(), Errc::config,
              "config: trailing characters in value for '" + key + "'");
      return x;
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::config, "config: '" + key + "' in [" + name_ + "] is not an integer: " + v);
    }
  }

  std::uint64_t take_u64(const std::string& key) {
    std::string v = take(key);
    try {
      size_t pos = 0;
      unsigned long long x = std::stoull(v, &pos);
      require(pos == v.size(), Errc::config,
              "config: trailing characters in value for '" + key + "'");
      return x;
    } catch (const Error&) {
      throw;
    } catch (...) {
      fail(Errc::config, "config: '" + key + "' in [" + name_ + "] is not a 64-bit unsigned: " + v);
    }
  }

  void finish() const {
    for (const auto& [key, value] : entries_) {
      (void)value;
      require(consumed_.count(key) != 0, Errc::config,
              "config: unknown key '" + key + "' in [" + name_ + "]");
    }
  }

  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
};

ReactionFn parse_reaction(Section& sec, const std::string& prefix) {
  std::string family = sec.take(prefix);
  if (family == "zero") return ReactionFn::zero();
  if (family == "constant") return ReactionFn::constant(sec.take_real(prefix + "_beta"));
  if (family == "linear") return ReactionFn::linear(sec.take_real(prefix + "_beta1"));
  if (family == "affine")
    return ReactionFn::affine(sec.take_real(prefix + "_beta0"), sec.take_real(prefix + "_beta1"));
  if (family == "logistic")
    return ReactionFn::logistic(sec.take_real(prefix + "_r"), sec.take_real(prefix + "_k"));
  fail(Errc::config, "config: unknown " + prefix + " family '" + family +
                         "' (expected zero|constant|linear|affine|logistic)");
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      require(line.back() == ']', Errc::config,
              "config: malformed section header at line " + std::to_string(line_no));
      current = trim(line.substr(1, line.size() - 2));
      require(!current.empty(), Errc::config,
              "config: empty section name at line " + std::to_string(line_no));
      sections.emplace(current, Section(current));
      continue;
    }
    size_t eq = line.find('=');
    require(eq != std::string::npos, Errc::config,
            "config: expected 'key = value' at line " + std::to_string(line_no));
    require(!current.empty(), Errc::config,
            "config: key outside any section at line " + std::to_string(line_no));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    require(!key.empty() && !value.empty(), Errc::config,
            "config: empty key or value at line " + std::to_string(line_no));
    sections.at(current).add(key, value, line_no);
  }

  const std::set<std::string> known = {"grid", "scaling", "reaction",
                                       "perturbation", "initial", "run"};
  for (const auto& [name, sec] : sections) {
    (void)sec;
    require(known.count(name) != 0, Errc::config, "config: unknown section [" + name + "]");
  }
  for (const std::string& name : known)
    require(sections.count(name) != 0, Errc::config, "config: missing section [" + name + "]");

  RunConfig cfg;

  {
    Section& g = sections.at("grid");
    std::int64_t n = g.take_int("n_sites");
    require(n >= 2 && n <= 1 << 20, Errc::config, "config: n_sites out of range");
    cfg.grid.n_sites = int(n);
    g.finish();
  }

  {
    Section& s = sections.at("scaling");
    std::string law = s.take("law");
    if (law == "power") {
      cfg.scaling = ScalingLaw::power(s.take_real("alpha"));
    } else if (law == "exponential") {
      cfg.scaling = ScalingLaw::exponential(s.take_real("c"));
    } else if (law == "fixed") {
      std::int64_t ell = s.take_int("ell");
      require(ell >= 1, Errc::config, "config: ell must be >= 1");
      cfg.scaling = ScalingLaw::fixed(std::uint64_t(ell));
    } else {
      fail(Errc::config, "config: unknown scaling law '" + law +
                             "' (expected power|exponential|fixed)");
    }
    s.finish();
  }

  {
    Section& r = sections.at("reaction");
    cfg.reaction.birth = parse_reaction(r, "birth");
    cfg.reaction.death = parse_reaction(r, "death");
    if (r.has("u_max")) cfg.reaction.u_max = r.take_real("u_max");
    r.finish();
    validate_reaction(cfg.reaction);
  }

  {
    Section& p = sections.at("perturbation");
    std::string variant = p.take("variant");
    if (variant == "zero") {
      cfg.perturbation = PerturbationSpec::zero();
    } else if (variant == "sine") {
      double amplitude = p.take_real("amplitude");
      std::int64_t mode = p.take_int("spatial_mode");
      require(mode >= 1 && mode <= 1 << 16, Errc::config, "config: spatial_mode out of range");
      std::string temporal = p.take("temporal");
      if (temporal == "constant") {
        cfg.perturbation =
            PerturbationSpec::sine(amplitude, int(mode), PerturbationSpec::Temporal::constant);
      } else if (temporal == "linear") {
        cfg.perturbation = PerturbationSpec::sine(
            amplitude, int(mode), PerturbationSpec::Temporal::linear, p.take_real("slope"));
      } else if (temporal == "cosine") {
        cfg.perturbation = PerturbationSpec::sine(
            amplitude, int(mode), PerturbationSpec::Temporal::cosine, p.take_real("omega"));
      } else {
        fail(Errc::config, "config: unknown temporal profile '" + temporal +
                               "' (expected constant|linear|cosine)");
      }
    } else {
      fail(Errc::config, "config: unknown perturbation variant '" + variant +
                             "' (expected zero|sine)");
    }
    p.finish();
  }

  {
    Section& i = sections.at("initial");
    std::string variant = i.take("variant");
    if (variant == "constant") {
      cfg.initial = InitialProfile::constant(i.take_real("gamma"));
    } else if (variant == "smooth") {
      cfg.initial = InitialProfile::smooth(i.take_real("a"), i.take_real("b"));
    } else {
      fail(Errc::config, "config: unknown initial variant '" + variant +
                             "' (expected constant|smooth)");
    }
    i.finish();
  }

  {
    Section& r = sections.at("run");
    cfg.t_final = r.take_real("t_final");
    require(cfg.t_final > 0.0 && std::isfinite(cfg.t_final), Errc::config,
            "config: t_final must be positive");
    cfg.seed = r.take_u64("seed");
    std::int64_t reps = r.take_int("replicas");
    require(reps >= 1 && reps <= 1'000'000, Errc::config, "config: replicas out of range");
    cfg.replicas = int(reps);
    r.finish();
  }

  // Resolving now surfaces overflow at parse time rather than mid-run.
  (void)cfg.resolved_ell();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), Errc::io, "config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "[grid]\nn_sites = " << grid.n_sites << "\n\n[scaling]\n";
  switch (scaling.kind) {
    case ScalingLaw::Kind::power:
      out << "law = power\nalpha = " << fmt_real(scaling.alpha) << "\n";
      break;
    case ScalingLaw::Kind::exponential:
      out << "law = exponential\nc = " << fmt_real(scaling.c) << "\n";
      break;
    case ScalingLaw::Kind::fixed:
      out << "law = fixed\nell = " << scaling.ell << "\n";
      break;
  }
  out << "\n[reaction]\nbirth = " << reaction.birth.describe()
      << "\ndeath = " << reaction.death.describe() << "\nu_max = " << fmt_real(reaction.u_max)
      << "\n\n[perturbation]\nvariant = " << perturbation.describe()
      << "\n\n[initial]\nvariant = "
      << (initial.kind() == InitialProfile::Kind::constant
              ? "constant gamma=" + fmt_real(initial.p0())
              : "smooth a=" + fmt_real(initial.p0()) + " b=" + fmt_real(initial.p1()))
      << "\n\n[run]\nt_final = " << fmt_real(t_final) << "\nseed = " << seed
      << "\nreplicas = " << replicas << "\n";
  return out.str();
}

std::string text_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return text_hash(cfg.canonical()); }

}  // namespace hdld
