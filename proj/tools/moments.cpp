// moments: run scenario files and the built-in experiments.
//
//   moments run <file...> [--samples N --seed S] [--format json|csv]
//   moments check <file...>
//   moments epr --who alice|bob --outcome +1|-1 [--t1 1 --T 2 --t2 3]
//   moments double-life --psi1 "up z" --psi2 "up x" --moments 4 [--observable "pauli z" --pair 0,1]
//   moments sweep [--alpha 0.8 --alpha 0.9 ...]
//   moments protocol --n 3 --psi "spin 1 0.5" [--plans 50 --seed 1]
//   moments builtin <name>          (prints the scenario text; no name lists them)
//
// Exit codes: 0 ok, 1 parse error / unreadable file / bad argument,
// 2 conditioning impossible, 3 dimension cap exceeded.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "moments/protocol.hpp"
#include "moments/scenario.hpp"

namespace {

using namespace moments;
using namespace moments::scenario;

enum Exit { kOk = 0, kParse = 1, kImpossible = 2, kCap = 3 };

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kParse, path + ": cannot read file"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Translates library errors into exit codes; `where` prefixes messages.
template <typename F>
int guarded(std::ostream& err, const std::string& where, F&& body) {
  const std::string prefix = where.empty() ? "" : where + ":";
  try {
    body();
    return kOk;
  } catch (const Failure& f) {
    err << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    err << prefix << e.line() << ":" << e.column() << ": " << e.reason() << "\n";
    return kParse;
  } catch (const ConditioningImpossible& e) {
    err << prefix << " " << e.what() << "\n";
    return kImpossible;
  } catch (const DimensionCapExceeded& e) {
    err << prefix << " " << e.what() << "\n";
    return kCap;
  } catch (const Error& e) {
    err << prefix << " " << e.what() << "\n";
    return kParse;
  }
}

struct FileResult {
  int code = kOk;
  std::string output;
  std::string errors;
};

FileResult run_file(const std::string& path, const RunOptions& options, ReportFormat format) {
  FileResult r;
  std::ostringstream err;
  r.code = guarded(err, path, [&] { r.output = report(run_scenario(parse_scenario(read_file(path)), options), format); });
  r.errors = err.str();
  return r;
}

nlohmann::json equivalence_json(const protocol::EquivalenceReport& rep) {
  return {{"n_moments", rep.n_moments},
          {"plans", rep.plans},
          {"seed", rep.seed},
          {"max_total_variation", rep.max_total_variation},
          {"min_baseline_total_variation", rep.min_baseline_total_variation},
          {"max_baseline_total_variation", rep.max_baseline_total_variation},
          {"success_probability", rep.success_probability},
          {"expected_success_probability", rep.expected_success_probability}};
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ValueError("--pair expects 'first,second'");
  return {std::stoul(text.substr(0, comma)), std::stoul(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-time states: scenario runner"};
  app.require_subcommand(1);
  std::string format_name = "json";

  auto* run = app.add_subcommand("run", "run scenario files");
  std::vector<std::string> run_files;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  run->add_option("files", run_files, "scenario files")->required();
  auto* samples_opt = run->add_option("--samples", samples, "Monte Carlo samples (exact when absent)");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  samples_opt->needs(seed_opt);
  seed_opt->needs(samples_opt);
  run->add_option("--format", format_name, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* check = app.add_subcommand("check", "parse and validate scenario files");
  std::vector<std::string> check_files;
  check->add_option("files", check_files, "scenario files")->required();

  auto* epr = app.add_subcommand("epr", "EPR pair with a collapse on Alice's particle");
  std::string who = "alice";
  std::string outcome = "+1";
  std::size_t t1 = 1, collapse_at = 2, t2 = 3;
  epr->add_option("--who", who)->check(CLI::IsMember({"alice", "bob"}));
  epr->add_option("--outcome", outcome)->check(CLI::IsMember({"+1", "-1", "1"}));
  epr->add_option("--t1", t1);
  epr->add_option("--T", collapse_at, "collapse between @T and @T+1");
  epr->add_option("--t2", t2);
  epr->add_option("--format", format_name)->check(CLI::IsMember({"json", "csv"}));

  auto* dl = app.add_subcommand("double-life", "stride-2 chain with two pre-selections");
  std::string psi1 = "up z", psi2 = "up x", observable = "pauli z", pair = "0,1";
  std::size_t n_moments = 4;
  dl->add_option("--psi1", psi1, "state of even moments");
  dl->add_option("--psi2", psi2, "state of odd moments");
  dl->add_option("--moments", n_moments);
  dl->add_option("--observable", observable);
  dl->add_option("--pair", pair, "first,second moment of the difference meter");
  dl->add_option("--format", format_name)->check(CLI::IsMember({"json", "csv"}));

  auto* sweep = app.add_subcommand("sweep", "partial-link strength sweep");
  std::vector<double> alphas;
  sweep->add_option("--alpha", alphas, "strengths (default 0.71 ... 1.00)");

  auto* proto = app.add_subcommand("protocol", "single-time protocol vs single-spin oracle");
  std::size_t n = 3, plans = 50;
  std::uint64_t proto_seed = 1;
  std::string psi = "spin 1 0.5";
  proto->add_option("--n", n, "moments");
  proto->add_option("--psi", psi, "pre-selected single-spin state");
  proto->add_option("--plans", plans);
  proto->add_option("--seed", proto_seed);

  auto* builtin = app.add_subcommand("builtin", "print a built-in scenario");
  std::string builtin_name;
  builtin->add_option("name", builtin_name);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    const ReportFormat format = parse_report_format(format_name);
    std::vector<RunOptions> options(run_files.size());
    if (*samples_opt) {
      // one file keeps the given seed; a batch derives one seed per file
      std::mt19937_64 seeder(seed);
      for (auto& o : options) o.sampling = Sampling{samples, run_files.size() == 1 ? seed : seeder()};
    }
    std::vector<std::future<FileResult>> jobs;
    for (std::size_t i = 0; i < run_files.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, run_file, run_files[i], options[i], format));
    }
    int code = kOk;
    nlohmann::json batch = nlohmann::json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const FileResult r = jobs[i].get();
      std::cerr << r.errors;
      if (code == kOk) code = r.code;
      if (r.code != kOk) continue;
      if (run_files.size() == 1) {
        std::cout << r.output;
      } else if (format == ReportFormat::json) {
        batch.push_back({{"file", run_files[i]}, {"report", nlohmann::json::parse(r.output)}});
      } else {
        std::cout << "# " << run_files[i] << "\n" << r.output;
      }
    }
    if (run_files.size() > 1 && format == ReportFormat::json) std::cout << batch.dump(2) << "\n";
    return code;
  }

  if (*check) {
    int code = kOk;
    for (const auto& file : check_files) {
      const int c = guarded(std::cerr, file, [&] {
        parse_scenario(read_file(file));
        std::cout << file << ": ok\n";
      });
      if (code == kOk) code = c;
    }
    return code;
  }

  if (*epr) {
    return guarded(std::cerr, "", [&] {
      const int sign = outcome == "-1" ? -1 : +1;
      std::cout << report(run_epr(parse_party(who), t1, collapse_at, t2, sign), parse_report_format(format_name));
    });
  }

  if (*dl) {
    return guarded(std::cerr, "", [&] {
      const auto [first, second] = parse_pair(pair);
      std::cout << report(run_double_life(parse_state_spec(psi1), parse_state_spec(psi2), n_moments,
                                          parse_observable_spec(observable), first, second),
                          parse_report_format(format_name));
    });
  }

  if (*sweep) {
    return guarded(std::cerr, "", [&] {
      if (alphas.empty())
        for (int k = 71; k <= 100; ++k) alphas.push_back(k / 100.0);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& p : partial_sweep(alphas)) {
        out.push_back({{"alpha", p.alpha},
                       {"beta", p.beta},
                       {"variance", p.variance},
                       {"success_probability", p.success_probability}});
      }
      std::cout << out.dump(2) << "\n";
    });
  }

  if (*proto) {
    return guarded(std::cerr, "", [&] {
      const State state = make_state(parse_state_spec(psi), RegisterLayout::single("psi", 2));
      std::cout << equivalence_json(protocol::equivalence_report(state, n, plans, proto_seed)).dump(2) << "\n";
    });
  }

  if (*builtin) {
    return guarded(std::cerr, "", [&] {
      if (builtin_name.empty()) {
        for (const auto& name : builtin_names()) std::cout << name << "\n";
      } else {
        std::cout << builtin_text(builtin_name);
      }
    });
  }
  return kOk;
}
