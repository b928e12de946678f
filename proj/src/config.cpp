#include "dnf/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "dnf/errors.hpp"
#include "dnf/outputs.hpp"

namespace dnf {

ModelSpec RunConfig::model() const {
  ModelSpec m;
  m.gamma = gamma;
  m.nu = nu;
  m.firing = {mu, theta};
  m.kernel = {kappa, sigma, xi0};
  m.init = {rho, x0, init_sigma};
  return m;
}

TimeGrid RunConfig::time() const { return TimeGrid::make(tau, T); }

SweepConfig RunConfig::sweep() const {
  SweepConfig s;
  s.model = model();
  s.grid = grid;
  s.time = time();
  s.nus = nus;
  s.threads = threads;
  return s;
}

void apply_scale_preset(RunConfig& cfg, bool full) {
  cfg.grid.n_x = full ? 4096 : 1024;
  cfg.grid.n_xi = full ? 1024 : 256;
}

void validate_config(const RunConfig& cfg) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };

  check(cfg.grid.n_x >= 4, "grid.n_x must be >= 4");
  check(cfg.grid.n_x % 2 == 0, "grid.n_x must be even");
  check(cfg.grid.n_xi >= 3, "grid.n_xi must be >= 3");
  check(cfg.grid.L_x > 0.0, "grid.L_x must be > 0");
  check(cfg.grid.L_xi > 0.0, "grid.L_xi must be > 0");

  check(cfg.gamma >= 0.0, "model.gamma must be >= 0");
  check(cfg.nu >= 0.0, "model.nu must be >= 0");
  check(cfg.sigma > 0.0, "model.sigma must be > 0");
  check(cfg.init_sigma > 0.0, "model.init_sigma must be > 0");
  check(cfg.mu >= 0.0, "model.mu must be >= 0");
  if (cfg.grid.L_xi > 0.0) {
    check(cfg.xi0 > -cfg.grid.L_xi && cfg.xi0 < cfg.grid.L_xi,
          "model.xi0 must lie inside (-L_xi, L_xi)");
  }

  check(cfg.tau > 0.0, "time.tau must be > 0");
  check(cfg.T >= 0.0, "time.T must be >= 0");
  if (cfg.tau > 0.0 && cfg.T >= 0.0) {
    const long n = std::lround(cfg.T / cfg.tau);
    check(std::abs(n * cfg.tau - cfg.T) <= 1e-12 * std::max(1.0, cfg.T),
          "time.T must be an integer multiple of time.tau");
  }

  check(cfg.nus.size() >= 3, "sweep.nus needs at least 3 entries");
  if (!cfg.nus.empty()) {
    check(cfg.nus.front() == 0.0, "sweep.nus must start at 0");
    for (std::size_t k = 1; k < cfg.nus.size(); ++k) {
      if (!(cfg.nus[k] > cfg.nus[k - 1])) {
        problems.push_back("sweep.nus must be strictly increasing");
        break;
      }
    }
  }

  check(!cfg.out_dir.empty(), "output.dir must not be empty");
  check(cfg.snapshot_every >= 1, "output.snapshot_every must be >= 1");
  check(cfg.threads >= 1, "output.threads must be >= 1");

  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ConfigError(msg);
  }
}

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtol(t.c_str(), &end, 10);
  return end == t.c_str() + t.size();
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  std::map<std::string, Section> sections;
  std::vector<std::string> errors;
  std::string line, current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto pos = line.find_first_of("#;"); pos != std::string::npos) {
      line.erase(pos);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"grid", "model", "time", "sweep", "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || current == k;
      if (!ok) {
        errors.push_back("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
        current.clear();
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    if (current.empty()) {
      errors.push_back("line " + std::to_string(line_no) + ": key outside any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto [it, inserted] = sections[current].emplace(key, RawEntry{value, line_no});
    if (!inserted) {
      errors.push_back("line " + std::to_string(line_no) + ": duplicate key " + current + "." + key);
    }
  }

  RunConfig cfg;
  auto take = [&](const std::string& sec, const std::string& key) -> RawEntry* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.used = true;
    return &k->second;
  };
  auto bad = [&](const std::string& sec, const std::string& key, const RawEntry& e) {
    errors.push_back("line " + std::to_string(e.line) + ": cannot parse " + sec + "." + key +
                     " value '" + e.value + "'");
  };
  auto require_double = [&](const std::string& sec, const std::string& key, double& out) {
    if (RawEntry* e = take(sec, key)) {
      if (!parse_double(e->value, out)) bad(sec, key, *e);
    } else {
      errors.push_back("missing required key " + sec + "." + key);
    }
  };
  auto optional_double = [&](const std::string& sec, const std::string& key, double& out) {
    if (RawEntry* e = take(sec, key)) {
      if (!parse_double(e->value, out)) bad(sec, key, *e);
    }
  };
  auto optional_long = [&](const std::string& sec, const std::string& key, long& out) {
    if (RawEntry* e = take(sec, key)) {
      if (!parse_long(e->value, out)) bad(sec, key, *e);
    }
  };

  // [grid]: either an explicit node count pair or a scale preset
  RawEntry* scale = take("grid", "scale");
  RawEntry* nx = take("grid", "n_x");
  RawEntry* nxi = take("grid", "n_xi");
  if (scale && (nx || nxi)) {
    errors.push_back("grid.scale and explicit grid.n_x/n_xi are mutually exclusive");
  } else if (scale) {
    const std::string v = trim(scale->value);
    if (v == "desk" || v == "full") {
      apply_scale_preset(cfg, v == "full");
    } else {
      errors.push_back("line " + std::to_string(scale->line) + ": grid.scale must be desk or full");
    }
  } else if (nx && nxi) {
    long v = 0;
    if (parse_long(nx->value, v)) cfg.grid.n_x = static_cast<int>(v);
    else bad("grid", "n_x", *nx);
    if (parse_long(nxi->value, v)) cfg.grid.n_xi = static_cast<int>(v);
    else bad("grid", "n_xi", *nxi);
  } else {
    errors.push_back("missing required keys: grid needs scale, or both n_x and n_xi");
  }
  require_double("grid", "L_x", cfg.grid.L_x);
  require_double("grid", "L_xi", cfg.grid.L_xi);

  require_double("model", "gamma", cfg.gamma);
  require_double("model", "nu", cfg.nu);
  require_double("model", "kappa", cfg.kappa);
  require_double("model", "sigma", cfg.sigma);
  require_double("model", "xi0", cfg.xi0);
  require_double("model", "mu", cfg.mu);
  require_double("model", "theta", cfg.theta);
  require_double("model", "rho", cfg.rho);
  require_double("model", "x0", cfg.x0);
  cfg.init_sigma = cfg.sigma;
  optional_double("model", "init_sigma", cfg.init_sigma);

  require_double("time", "tau", cfg.tau);
  require_double("time", "T", cfg.T);

  if (RawEntry* e = take("sweep", "nus")) {
    std::vector<double> nus;
    std::stringstream ss(e->value);
    std::string item;
    bool ok = true;
    while (std::getline(ss, item, ',')) {
      double v = 0.0;
      ok = ok && parse_double(item, v);
      nus.push_back(v);
    }
    if (!ok || nus.empty()) bad("sweep", "nus", *e);
    else cfg.nus = std::move(nus);
  }

  if (RawEntry* e = take("output", "dir")) cfg.out_dir = trim(e->value);
  optional_long("output", "snapshot_every", cfg.snapshot_every);
  long threads = cfg.threads;
  optional_long("output", "threads", threads);
  cfg.threads = static_cast<int>(threads);

  for (const auto& [sec, entries] : sections) {
    for (const auto& [key, entry] : entries) {
      if (!entry.used) {
        errors.push_back("line " + std::to_string(entry.line) + ": unknown key " + sec + "." + key);
      }
    }
  }

  if (!errors.empty()) {
    std::string msg = "config error in " + path.string() + ":";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }

  validate_config(cfg);
  return cfg;
}

void write_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());

  out << "[grid]\n";
  out << "n_x = " << cfg.grid.n_x << "\n";
  out << "n_xi = " << cfg.grid.n_xi << "\n";
  out << "L_x = " << fmt17(cfg.grid.L_x) << "\n";
  out << "L_xi = " << fmt17(cfg.grid.L_xi) << "\n\n";

  out << "[model]\n";
  out << "gamma = " << fmt17(cfg.gamma) << "\n";
  out << "nu = " << fmt17(cfg.nu) << "\n";
  out << "kappa = " << fmt17(cfg.kappa) << "\n";
  out << "sigma = " << fmt17(cfg.sigma) << "\n";
  out << "xi0 = " << fmt17(cfg.xi0) << "\n";
  out << "mu = " << fmt17(cfg.mu) << "\n";
  out << "theta = " << fmt17(cfg.theta) << "\n";
  out << "rho = " << fmt17(cfg.rho) << "\n";
  out << "x0 = " << fmt17(cfg.x0) << "\n";
  out << "init_sigma = " << fmt17(cfg.init_sigma) << "\n\n";

  out << "[time]\n";
  out << "tau = " << fmt17(cfg.tau) << "\n";
  out << "T = " << fmt17(cfg.T) << "\n\n";

  out << "[sweep]\n";
  out << "nus = ";
  for (std::size_t k = 0; k < cfg.nus.size(); ++k) {
    out << (k ? ", " : "") << fmt17(cfg.nus[k]);
  }
  out << "\n\n";

  out << "[output]\n";
  out << "dir = " << cfg.out_dir << "\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
  out << "threads = " << cfg.threads << "\n";
  if (!out) throw ConfigError("failed writing config file: " + path.string());
}

}  // namespace dnf
