// Command-line front end: runs verification checks, the full suite, and
// frame-coefficient exports.  Exit codes: 0 all checks pass, 1 configuration
// or usage error, 2 at least one check failed.
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "replift/suite.hpp"

namespace {

using namespace replift;

// "a..b" inclusive integer range
void parse_range_flag(const std::string& text, int& lo, int& hi,
                      const std::string& flag) {
  auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      lo = hi = std::stoi(text);
      return;
    }
    lo = std::stoi(text.substr(0, pos));
    hi = std::stoi(text.substr(pos + 2));
  } catch (const std::exception&) {
    throw ConfigError(flag + ": expected 'a..b', got '" + text + "'");
  }
  if (lo > hi) throw ConfigError(flag + ": lo > hi in '" + text + "'");
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("--alpha: bad number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--alpha: empty list");
  return out;
}

CaseTag make_case(const std::string& name, double alpha) {
  CaseSpec spec{name, alpha};
  return spec.tag();
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back((std::isalnum(static_cast<unsigned char>(c)) ||
                                  c == '-' || c == '.' || c == '_')
                                     ? c
                                     : '_');
  return out;
}

void write_report(const VerificationReport& r, const std::string& path,
                  const std::string& hash) {
  atomic_write(path, report_to_json(r, hash).dump(2) + "\n");
  std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.check_name << " ["
            << r.case_params << "] maxDefect=" << r.max_defect
            << " tol=" << r.tolerance << " -> " << path << "\n";
}

// join "--flag -2..2" style tokens so negative values survive CLI parsing
std::vector<std::string> preprocess(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    std::string tok = argv[i];
    bool flag = tok.rfind("--", 0) == 0 && tok.find('=') == std::string::npos;
    if (flag && i + 1 < argc) {
      std::string next = argv[i + 1];
      if (next.size() > 1 && next[0] == '-' &&
          (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
        args.push_back(tok + "=" + next);
        ++i;
        continue;
      }
    }
    args.push_back(tok);
  }
  return args;
}

struct CommonFlags {
  std::string config_path;
  std::string generator = "DR";
  std::string k_range, m_range;
  double tol = -1.0;  // <0: use config default
  std::string out = "report.json";
};

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return config_from_json(load_json_file(path));
}

void apply_common(const CommonFlags& fl, RunConfig& cfg) {
  if (!fl.k_range.empty())
    parse_range_flag(fl.k_range, cfg.box.k_min, cfg.box.k_max, "--k");
  if (!fl.m_range.empty())
    parse_range_flag(fl.m_range, cfg.box.m_min, cfg.box.m_max, "--m");
  if (fl.generator != "DR" && fl.generator != "DT")
    throw ConfigError("--generator must be DR or DT");
  cfg.generator = fl.generator;
}

LazyShannonLift lift_of(const RunConfig& cfg) {
  return cfg.generator == "DT" ? LazyShannonLift::circle()
                               : LazyShannonLift::line();
}

int finish(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification suite for dyadic reproducing systems"};
  app.require_subcommand(1);

  CommonFlags fl;
  std::string rep = "l", case_name, alpha_list, function_path, function2_path;
  std::string mode = "analytic", basis = "0,0";
  int fiber_box = 3, samples = 256, elements = 20, points = 64, kparam = 3;
  std::int64_t m_max = 1 << 14, depth = kDefaultBandDepth;
  std::uint64_t seed = 20260823;
  int spot = 10;

  auto add_common = [&](CLI::App* cmd, bool with_box = true) {
    cmd->add_option("--config", fl.config_path, "JSON config file");
    cmd->add_option("--generator", fl.generator, "DR (line) or DT (circle)");
    if (with_box) {
      cmd->add_option("--k", fl.k_range, "lattice k range, a..b inclusive");
      cmd->add_option("--m", fl.m_range, "lattice m range, a..b inclusive");
    }
    cmd->add_option("--tol", fl.tol, "defect tolerance");
    cmd->add_option("--depth", depth, "band depth of exact sums");
    cmd->add_option("--out", fl.out, "report output path");
  };

  CLI::App* verify = app.add_subcommand("verify", "run one verification check");
  verify->require_subcommand(1);

  CLI::App* v_gram = verify->add_subcommand("gram", "orthonormality Gram defect");
  v_gram->add_option("--rep", rep, "l, q, I, II, III or IV");
  v_gram->add_option("--alpha", alpha_list, "comma list of alpha values");
  v_gram->add_option("--spot", spot, "quadrature spot checks (non-l reps)");
  std::string fiber_range;
  v_gram->add_option("--l", fiber_range,
                     "fiber index box a..b (informational; the exact band sum "
                     "already covers every fiber index)");
  add_common(v_gram);

  CLI::App* v_parseval = verify->add_subcommand("parseval", "Parseval sum defect");
  v_parseval->add_option("--function", function_path, "atom-sum JSON file")
      ->required();
  v_parseval->add_option("--rep", rep);
  v_parseval->add_option("--mode", mode, "analytic or direct");
  add_common(v_parseval);

  CLI::App* v_isometry = verify->add_subcommand("isometry",
                                                "continuous isometry Gram");
  v_isometry->add_option("--rep", rep, "l or q");
  v_isometry->add_option("--fiber-box", fiber_box);
  add_common(v_isometry, false);

  CLI::App* v_discrete = verify->add_subcommand("discrete",
                                                "sampled discrete isometry");
  v_discrete->add_option("--rep", rep, "l, q, I, II, III or IV");
  v_discrete->add_option("--alpha", alpha_list);
  v_discrete->add_option("--samples", samples);
  v_discrete->add_option("--basis", basis, "fiber basis index 'k,l' for f=g");
  add_common(v_discrete);

  CLI::App* v_kernel = verify->add_subcommand("kernel", "kernel-table Gram");
  v_kernel->add_option("--case", case_name, "I, II, III or IV")->required();
  v_kernel->add_option("--alpha", alpha_list);
  v_kernel->add_option("--fiber-box", fiber_box);
  add_common(v_kernel, false);

  CLI::App* v_band = verify->add_subcommand("bandlimited",
                                            "band-limited summation identity");
  v_band->add_option("--band-k", kparam, "band exponent k");
  v_band->add_option("--m-max", m_max, "m-sum truncation");
  v_band->add_option("--function", function_path, "left factor JSON");
  v_band->add_option("--function2", function2_path, "right factor JSON");
  add_common(v_band, false);

  CLI::App* v_inter = verify->add_subcommand("intertwine",
                                             "pointwise intertwining defect");
  v_inter->add_option("--case", case_name, "L, Q, I, II, III or IV");
  v_inter->add_option("--alpha", alpha_list);
  v_inter->add_option("--elements", elements);
  v_inter->add_option("--points", points);
  v_inter->add_option("--seed", seed);
  add_common(v_inter, false);

  CLI::App* c_coeffs = app.add_subcommand("coeffs", "export frame coefficients");
  c_coeffs->add_option("--function", function_path, "atom-sum JSON file")
      ->required();
  c_coeffs->add_option("--rep", rep);
  add_common(c_coeffs);

  CLI::App* c_suite = app.add_subcommand("suite", "run the full suite");
  c_suite->add_option("--config", fl.config_path, "JSON config file");
  c_suite->add_option("--out", fl.out, "output directory")->default_val("reports");

  try {
    auto args = preprocess(argc, argv);
    std::vector<std::string> rargs(args.rbegin(), args.rend());
    app.parse(rargs);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg = load_config(fl.config_path);
    apply_common(fl, cfg);
    if (depth > 0) cfg.band_depth = depth;
    const std::string hash = config_hash(cfg);
    std::vector<VerificationReport> reports;

    auto alphas = [&](double fallback) {
      return alpha_list.empty() ? std::vector<double>{fallback}
                                : parse_alpha_list(alpha_list);
    };
    auto out_path = [&](std::size_t i, std::size_t total) {
      if (total <= 1) return fl.out;
      auto dot = fl.out.rfind(".json");
      std::string stem = (dot == std::string::npos) ? fl.out : fl.out.substr(0, dot);
      return stem + "_" + std::to_string(i) + ".json";
    };

    if (v_gram->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_exact;
      std::vector<CaseTag> tags;
      if (rep == "l") tags.push_back(CaseTag::L());
      else if (rep == "q") tags.push_back(CaseTag::Q());
      else
        for (double a : alphas(rep == "I" ? -0.5 : 0.7))
          tags.push_back(make_case(rep, a));
      for (std::size_t i = 0; i < tags.size(); ++i) {
        const CaseTag& c = tags[i];
        LazyShannonLift lift = (c.kind == CaseKind::III)
                                   ? LazyShannonLift::circle()
                                   : lift_of(cfg);
        reports.push_back(gram_defect(c, lift, cfg.box, tol,
                                      {cfg.band_depth,
                                       c.kind == CaseKind::L ? 0 : spot, 10,
                                       1e-9}));
        write_report(reports.back(), out_path(i, tags.size()), hash);
      }
    } else if (v_parseval->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_exact;
      AtomSum f = atoms_from_json(load_json_file(function_path));
      CaseTag c = rep == "q" ? CaseTag::Q() : CaseTag::L();
      ParsevalMode pm = (mode == "direct") ? ParsevalMode::Direct
                                           : ParsevalMode::Analytic;
      LazyShannonLift lift = (f.fiber_domain == FiberKind::Circle)
                                 ? LazyShannonLift::circle()
                                 : LazyShannonLift::line();
      reports.push_back(
          parseval_defect(f, c, lift, cfg.box, tol, pm, cfg.band_depth));
      write_report(reports.back(), fl.out, hash);
    } else if (v_isometry->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_exact;
      reports.push_back(isometry_defect_continuous(lift_of(cfg), rep == "q",
                                                   fiber_box, tol,
                                                   cfg.band_depth));
      write_report(reports.back(), fl.out, hash);
    } else if (v_discrete->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_exact;
      std::vector<CaseTag> tags;
      if (rep == "l") tags.push_back(CaseTag::L());
      else if (rep == "q") tags.push_back(CaseTag::Q());
      else
        for (double a : alphas(rep == "I" ? -0.5 : 0.7))
          tags.push_back(make_case(rep, a));
      auto comma = basis.find(',');
      if (comma == std::string::npos)
        throw ConfigError("--basis: expected 'k,l'");
      int bk = 0, bl = 0;
      parse_range_flag(basis.substr(0, comma), bk, bk, "--basis");
      parse_range_flag(basis.substr(comma + 1), bl, bl, "--basis");
      for (std::size_t i = 0; i < tags.size(); ++i) {
        const CaseTag& c = tags[i];
        LazyShannonLift lift = (c.kind == CaseKind::III)
                                   ? LazyShannonLift::circle()
                                   : lift_of(cfg);
        FiberCombo combo{lift.fiber, {{bk, bl, {1.0, 0.0}}}};
        DiscreteOptions opt;
        opt.samples = samples;
        opt.depth = cfg.band_depth;
        reports.push_back(
            discrete_isometry_defect(c, lift, combo, combo, tol, opt));
        write_report(reports.back(), out_path(i, tags.size()), hash);
      }
    } else if (v_kernel->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_quadrature;
      auto as = alphas(case_name == "I" ? -0.5 : 0.7);
      for (std::size_t i = 0; i < as.size(); ++i) {
        CaseTag c = make_case(case_name, as[i]);
        LazyShannonLift lift = (c.kind == CaseKind::III)
                                   ? LazyShannonLift::circle()
                                   : LazyShannonLift::line();
        KernelOptions opt;
        opt.depth = cfg.band_depth;
        reports.push_back(kernel_isometry_defect(c, lift, fiber_box, tol, opt));
        write_report(reports.back(), out_path(i, as.size()), hash);
      }
    } else if (v_band->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_quadrature;
      if (!function_path.empty() != !function2_path.empty())
        throw ConfigError("bandlimited: supply both --function and --function2");
      if (!function_path.empty()) {
        AtomSum f = atoms_from_json(load_json_file(function_path));
        AtomSum g = atoms_from_json(load_json_file(function2_path));
        reports.push_back(bandlimited_identity_defect(f, g, kparam, m_max, tol));
        write_report(reports.back(), fl.out, hash);
      } else {
        auto pairs = detail::bandlimited_pairs();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          auto& [f, g, k] = pairs[i];
          reports.push_back(bandlimited_identity_defect(f, g, k, m_max, tol));
          write_report(reports.back(), out_path(i, pairs.size()), hash);
        }
      }
    } else if (v_inter->parsed()) {
      double tol = fl.tol > 0 ? fl.tol : cfg.tol_intertwine;
      std::vector<CaseTag> tags;
      if (case_name.empty() || case_name == "L" || case_name == "Q")
        tags.push_back(CaseTag::L());
      else
        for (double a : alphas(case_name == "I" ? -0.5 : 0.7))
          tags.push_back(make_case(case_name, a));
      IntertwineOptions opt;
      opt.elements = elements;
      opt.points = points;
      opt.seed = seed;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        const CaseTag& c = tags[i];
        LazyShannonLift lift = (c.kind == CaseKind::III)
                                   ? LazyShannonLift::circle()
                                   : lift_of(cfg);
        reports.push_back(intertwine_defect(c, tol, lift, opt));
        write_report(reports.back(), out_path(i, tags.size()), hash);
      }
    } else if (c_coeffs->parsed()) {
      AtomSum f = atoms_from_json(load_json_file(function_path));
      LazyShannonLift lift = (f.fiber_domain == FiberKind::Circle)
                                 ? LazyShannonLift::circle()
                                 : LazyShannonLift::line();
      CaseTag c = rep == "q" ? CaseTag::Q() : CaseTag::L();
      std::ostringstream csv;
      csv << "k,m,coef_re,coef_im\n";
      csv << std::setprecision(17);
      double sum = 0.0;
      for (int k = cfg.box.k_min; k <= cfg.box.k_max; ++k)
        for (int m = cfg.box.m_min; m <= cfg.box.m_max; ++m) {
          complex_t v = atoms_vs_transformed_lift(
              f, CaseTag::L(), replift::detail::l_side_lattice(c, k, m), lift,
              RadialWeight{0.0}, cfg.band_depth);
          sum += std::norm(v);
          csv << k << "," << m << "," << v.real() << "," << v.imag() << "\n";
        }
      csv << "parseval,," << sum << ",\n";
      double nrm = norm_exact(f, RadialWeight{0.0});
      if (std::abs(nrm * nrm - sum) > 1e-6 * std::max(1.0, nrm * nrm))
        std::cerr << "warning: coefficient energy " << sum
                  << " differs from ||f||^2 = " << nrm * nrm
                  << "; the truncation box may be too small\n";
      std::string path = fl.out == "report.json" ? "coeffs.csv" : fl.out;
      atomic_write(path, csv.str());
      std::cout << "wrote " << path << "\n";
      return 0;
    } else if (c_suite->parsed()) {
      SuiteResult res = run_suite(cfg);
      std::filesystem::create_directories(fl.out);
      for (const auto& r : res.reports) {
        std::string name = sanitize(r.check_name + "_" + r.case_params) + ".json";
        write_report(r, fl.out + "/" + name, hash);
      }
      atomic_write(fl.out + "/suite.json",
                   suite_to_json(res, cfg, true).dump(2) + "\n");
      atomic_write(fl.out + "/suite_deterministic.json",
                   suite_to_json(res, cfg, false).dump(2) + "\n");
      std::cout << (res.all_pass ? "PASS" : "FAIL") << " suite ("
                << res.reports.size() << " checks) -> " << fl.out << "\n";
      return res.all_pass ? 0 : 2;
    }

    return finish(reports);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CaseMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
