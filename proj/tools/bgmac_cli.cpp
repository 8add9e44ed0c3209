// Command-line front end: evaluates capacities, bounds, rate regions, and
// memory-channel curves from JSON configs and writes CSV/JSON tables.

#include <CLI11.hpp>
#include <json.hpp>

#include "bgmac/capacities.hpp"
#include "bgmac/channel.hpp"
#include "bgmac/fock.hpp"
#include "bgmac/memory_channel.hpp"
#include "bgmac/region.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

int g_exit_code = 0;

struct CommonOptions {
  std::string config_path;
  std::string out_path = "-";
  std::string format = "csv";
  int rays = 20;
  unsigned seed = 0;
  bool oracle = false;
};

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return json::parse(in);
}

// Row-oriented table, written as CSV (12 significant digits) or a JSON array
// of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<json> cells) {
    if (cells.size() != columns_.size()) throw std::logic_error("table row size mismatch");
    rows_.push_back(std::move(cells));
  }

  void write(const std::string& path, const std::string& format) const {
    std::ostringstream os;
    if (format == "csv") {
      for (std::size_t c = 0; c < columns_.size(); ++c) {
        os << (c ? "," : "") << columns_[c];
      }
      os << "\n";
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c) os << ",";
          if (row[c].is_number_float()) {
            os << fmt(row[c].get<double>());
          } else if (row[c].is_string()) {
            os << row[c].get<std::string>();
          } else if (!row[c].is_null()) {
            os << row[c].dump();
          }
        }
        os << "\n";
      }
    } else if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows_) {
        json obj;
        for (std::size_t c = 0; c < row.size(); ++c) obj[columns_[c]] = row[c];
        arr.push_back(obj);
      }
      os << arr.dump(2) << "\n";
    } else {
      throw std::invalid_argument("unknown format '" + format + "'");
    }
    write_text(path, os.str());
  }

  static void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file " + path);
    out << text;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<json>> rows_;
};

bgmac::PhaseInsensitiveBgmac channel_from_config(const json& cfg) {
  if (!cfg.contains("channel")) throw std::invalid_argument("config needs a \"channel\" object");
  return bgmac::channel_from_json(cfg.at("channel").dump());
}

// Budgets come either as a fixed per-sender list {"ns": [...]} or as a sweep
// {"sweep": {"fractions": [...], "total": [...] | {"logspace": [lo, hi, n]}}}.
std::vector<bgmac::EnergyBudget> budgets_from_config(const json& cfg, int senders) {
  std::vector<bgmac::EnergyBudget> out;
  if (cfg.contains("ns")) {
    auto ns = cfg.at("ns").get<std::vector<double>>();
    if (static_cast<int>(ns.size()) != senders) {
      throw std::invalid_argument("\"ns\" must list one brightness per sender");
    }
    out.push_back(bgmac::EnergyBudget{std::move(ns)});
    return out;
  }
  if (!cfg.contains("sweep")) {
    throw std::invalid_argument("config needs \"ns\" or \"sweep\"");
  }
  const json& sweep = cfg.at("sweep");
  const auto fractions = sweep.at("fractions").get<std::vector<double>>();
  if (static_cast<int>(fractions.size()) != senders) {
    throw std::invalid_argument("sweep fractions must list one entry per sender");
  }
  std::vector<double> totals;
  const json& total = sweep.at("total");
  if (total.is_array()) {
    totals = total.get<std::vector<double>>();
  } else {
    const auto spec = total.at("logspace").get<std::vector<double>>();
    if (spec.size() != 3) throw std::invalid_argument("logspace wants [lo_exp, hi_exp, points]");
    const int n = static_cast<int>(spec[2]);
    for (int i = 0; i < n; ++i) {
      const double e = spec[0] + (n == 1 ? 0.0 : (spec[1] - spec[0]) * i / (n - 1));
      totals.push_back(std::pow(10.0, e));
    }
  }
  for (double t : totals) {
    std::vector<double> ns(fractions.size());
    for (std::size_t k = 0; k < fractions.size(); ++k) ns[k] = fractions[k] * t;
    out.push_back(bgmac::EnergyBudget{std::move(ns)});
  }
  return out;
}

std::string sender_set_label(std::uint32_t mask, int s) {
  if (mask == 0) return "empty";
  std::string label;
  for (int k = 0; k < s; ++k) {
    if ((mask >> k) & 1u) {
      if (!label.empty()) label += "+";
      label += std::to_string(k + 1);
    }
  }
  return label;
}

int fock_dim_for(double photons, double tail = 1e-9) {
  if (photons <= 0.0) return 4;
  int d = 4;
  while (d < 64 && std::pow(photons / (photons + 1.0), d) > tail) ++d;
  return d;
}

double fock_ea_rate(const bgmac::PointToPointBgc& bgc, double ns, const std::vector<int>& dims) {
  if (bgc.conjugated) {
    throw std::invalid_argument("the Fock oracle covers covariant channels only");
  }
  if (bgc.weight2 >= 1.0) {
    throw std::invalid_argument("the Fock oracle covers transmissivity < 1 only");
  }
  if (dims.size() != 3 || dims[0] != dims[1]) {
    throw std::invalid_argument("oracle dims are [reference, signal, environment] with equal "
                                "reference and signal truncation");
  }
  const double env_photons = bgc.dark_photons / (1.0 - bgc.weight2);
  const bgmac::FockState tmsv = bgmac::fock_tmsv(ns, dims.at(0));
  const bgmac::FockState out =
      bgmac::fock_thermal_loss_apply(tmsv, 1, bgc.weight2, env_photons, dims.at(2));
  return bgmac::fock_mutual_information(out, {0});
}

void run_point_capacity(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const bgmac::PointToPointBgc bgc = bgmac::bgc_from_json(cfg.at("bgc").dump());
  std::vector<double> ns_list;
  if (cfg.at("ns").is_array()) {
    ns_list = cfg.at("ns").get<std::vector<double>>();
  } else {
    ns_list.push_back(cfg.at("ns").get<double>());
  }

  std::vector<std::string> columns{"ns", "class", "ea_bits", "coherent_bits", "ratio"};
  if (opt.oracle) {
    columns.push_back("fock_bits");
    columns.push_back("fock_abs_diff");
  }
  Table table(columns);
  for (double ns : ns_list) {
    const double ea = bgmac::ea_bgc_capacity(bgc, ns);
    const double coh = bgmac::thermal_entropy(bgc.weight2 * ns + bgc.dark_photons) -
                       bgmac::thermal_entropy(bgc.dark_photons);
    std::vector<json> row{ns, bgmac::to_string(bgmac::classify(bgc)), ea, coh,
                          coh > 0.0 ? json(ea / coh) : json()};
    if (opt.oracle) {
      std::vector<int> dims;
      if (cfg.contains("oracle_dims")) {
        dims = cfg.at("oracle_dims").get<std::vector<int>>();
      } else {
        const int d = std::max(12, fock_dim_for(ns));
        dims = {d, d, std::max(12, fock_dim_for(bgc.dark_photons / (1.0 - bgc.weight2)))};
      }
      const double fock = fock_ea_rate(bgc, ns, dims);
      row.push_back(fock);
      row.push_back(std::abs(fock - ea));
    }
    table.add_row(std::move(row));
  }
  table.write(opt.out_path, opt.format);
}

void run_coherent_region(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const auto channel = channel_from_config(cfg);
  const auto budgets = budgets_from_config(cfg, channel.senders());
  Table table({"ns_total", "mask", "senders", "bound_bits"});
  for (const auto& budget : budgets) {
    const int s = channel.senders();
    for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
      table.add_row({budget.total(), static_cast<double>(mask), sender_set_label(mask, s),
                     bgmac::coherent_bound(channel, budget, bgmac::SenderSet{mask, s})});
    }
  }
  table.write(opt.out_path, opt.format);
}

void add_outer_rows(Table& table, const char* family, const bgmac::OuterBoundsReport& report,
                    double ns_total) {
  const auto add = [&](const bgmac::OuterBounds& b) {
    const std::string cond = b.condition_used == bgmac::NoiseCondition::A ? "a" : "b";
    for (std::size_t k = 0; k < b.individual.size(); ++k) {
      table.add_row({ns_total, family, cond, "sender_" + std::to_string(k + 1), b.individual[k],
                     b.sender_dark_counts[k]});
    }
    table.add_row({ns_total, family, cond, "total", b.total, json()});
  };
  if (report.condition_a) add(*report.condition_a);
  if (report.condition_b) add(*report.condition_b);
  if (!report.any()) {
    table.add_row({ns_total, family, "none", "no_bound_available", json(), json()});
  }
}

void run_outer_bounds(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const auto channel = channel_from_config(cfg);
  const auto budgets = budgets_from_config(cfg, channel.senders());
  Table table({"ns_total", "family", "condition", "scope", "bits", "dark_count"});
  for (const auto& budget : budgets) {
    add_outer_rows(table, "unassisted", bgmac::unassisted_outer(channel, budget), budget.total());
    add_outer_rows(table, "ea", bgmac::ea_outer(channel, budget), budget.total());
  }
  table.write(opt.out_path, opt.format);
}

void run_ea_total(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const auto channel = channel_from_config(cfg);
  const auto budgets = budgets_from_config(cfg, channel.senders());
  Table table({"ns_total", "ea_total_bits", "coherent_total_bits", "ratio"});
  const auto universe = bgmac::SenderSet::universe(channel.senders());
  for (const auto& budget : budgets) {
    const double ea = bgmac::ea_total_rate_capacity(channel, budget);
    const double coh = bgmac::coherent_bound(channel, budget, universe);
    table.add_row({budget.total(), ea, coh, coh > 0.0 ? json(ea / coh) : json()});
  }
  table.write(opt.out_path, opt.format);
}

void run_gaussian_region(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const auto channel = channel_from_config(cfg);
  const auto budgets = budgets_from_config(cfg, channel.senders());
  if (budgets.size() != 1) {
    throw std::invalid_argument("gaussian-region evaluates a single budget");
  }
  if (opt.format == "csv" && opt.out_path == "-") {
    throw std::invalid_argument("gaussian-region csv output needs --out (hull goes to <out>.hull.json)");
  }
  bgmac::RayConfig ray_config;
  ray_config.seed = opt.seed;
  const auto result = bgmac::union_region(channel, budgets[0], opt.rays, ray_config);

  bool all_converged = true;
  const int s = channel.senders();
  Table table({"phi", "R1", "R2", "r1", "r2", "theta2", "iterations"});
  for (int i = 0; i < static_cast<int>(result.rays.size()); ++i) {
    const auto& ray = result.rays[i];
    if (!bgmac::feasible(ray.point, ray.constraints, 1e-9)) {
      throw std::runtime_error("self-consistency failure: ray point violates its constraints");
    }
    all_converged = all_converged && ray.converged;
    table.add_row({(M_PI / 2.0) * i / result.rays.size(), ray.point.rates(0), ray.point.rates(1),
                   ray.encoding.r(0), ray.encoding.r(1), ray.encoding.theta(1),
                   static_cast<double>(ray.iterations)});
  }

  json hull = json::array();
  for (const auto& v : result.hull) hull.push_back({v.rates(0), v.rates(1)});

  if (opt.format == "json") {
    json doc;
    doc["senders"] = s;
    doc["rays"] = json::array();
    for (int i = 0; i < static_cast<int>(result.rays.size()); ++i) {
      const auto& ray = result.rays[i];
      doc["rays"].push_back({{"phi", (M_PI / 2.0) * i / result.rays.size()},
                             {"point", {ray.point.rates(0), ray.point.rates(1)}},
                             {"r", {ray.encoding.r(0), ray.encoding.r(1)}},
                             {"theta2", ray.encoding.theta(1)},
                             {"iterations", ray.iterations},
                             {"converged", ray.converged}});
    }
    doc["hull"] = hull;
    Table::write_text(opt.out_path, doc.dump(2) + "\n");
  } else {
    table.write(opt.out_path, opt.format);
    Table::write_text(opt.out_path + ".hull.json", hull.dump(2) + "\n");
  }
  if (!all_converged) g_exit_code = 4;
}

void run_memory(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  bgmac::CausalMemoryParams params;
  params.epsilon = cfg.at("epsilon").get<double>();
  params.gamma = cfg.at("gamma").get<double>();
  params.uses = cfg.at("n").get<int>();
  params.dark_photons = cfg.at("nb").get<double>();
  const auto eta = cfg.at("eta").get<std::vector<double>>();
  const auto budgets = budgets_from_config(cfg, static_cast<int>(eta.size()));

  bgmac::AllocationConfig alloc;
  alloc.seed = opt.seed;
  bool all_converged = true;
  Table table({"ns_total", "ea_bits", "coherent_bits", "ratio"});
  for (const auto& budget : budgets) {
    const auto ea = bgmac::memory_total_rate(params, eta, budget, alloc);
    const auto coh = bgmac::memory_coherent_benchmark(params, eta, budget, alloc);
    all_converged = all_converged && ea.converged && coh.converged;
    table.add_row({budget.total(), ea.bits, coh.bits,
                   coh.bits > 0.0 ? json(ea.bits / coh.bits) : json()});
  }
  table.write(opt.out_path, opt.format);
  if (!all_converged) g_exit_code = 4;
}

void run_oracle_check(const CommonOptions& opt) {
  const json cfg = load_config(opt.config_path);
  const bgmac::PointToPointBgc bgc = bgmac::bgc_from_json(cfg.at("bgc").dump());
  const double ns = cfg.at("ns").get<double>();
  std::vector<int> dims{25, 25, 30};
  if (cfg.contains("dims")) dims = cfg.at("dims").get<std::vector<int>>();

  const double fock = fock_ea_rate(bgc, ns, dims);
  const auto channel = bgmac::PhaseInsensitiveBgmac::from_bgc(bgc);
  const double gaussian = bgmac::ea_total_rate_capacity(channel, bgmac::EnergyBudget{{ns}});

  Table table({"ns", "gaussian_bits", "fock_bits", "abs_diff"});
  table.add_row({ns, gaussian, fock, std::abs(gaussian - fock)});
  table.write(opt.out_path, opt.format);
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_rays = false,
                bool with_oracle = false) {
  cmd->add_option("--config", opt.config_path, "JSON config file")->required();
  cmd->add_option("--out", opt.out_path, "output path, '-' for stdout");
  cmd->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opt.seed, "seed for optimizer multi-starts");
  if (with_rays) cmd->add_option("--rays", opt.rays, "number of region rays");
  if (with_oracle) cmd->add_flag("--oracle", opt.oracle, "cross-check with the Fock oracle");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate limits of phase-insensitive bosonic Gaussian multiple-access channels"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::function<void()> run;

  const auto make = [&](const char* name, const char* help, void (*fn)(const CommonOptions&),
                        bool with_rays = false, bool with_oracle = false) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, opt, with_rays, with_oracle);
    cmd->callback([&run, fn, &opt] { run = [fn, &opt] { fn(opt); }; });
    return cmd;
  };

  make("point-capacity", "EA and coherent-state capacity of a point-to-point channel",
       &run_point_capacity, false, true);
  make("coherent-region", "coherent-state region boundaries for all sender sets",
       &run_coherent_region);
  make("outer-bounds", "unassisted and EA outer bounds", &run_outer_bounds);
  make("ea-total", "EA total-rate capacity against the coherent benchmark", &run_ea_total);
  make("gaussian-region", "ray-optimized Gaussian-state rate region", &run_gaussian_region,
       true);
  make("memory", "causal memory channel total-rate curves", &run_memory);
  make("oracle-check", "Fock-space cross-check of the Gaussian pipeline", &run_oracle_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    run();
  } catch (const bgmac::unphysical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit_code;
}
