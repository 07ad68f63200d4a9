#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "loopq/correlator.hpp"
#include "loopq/rmatrix.hpp"
#include "loopq/weyl.hpp"

namespace {

// 0 = all checks pass, 1 = a mathematical check failed, 2 = usage error.
constexpr int kExitPass = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitUsage = 2;

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output path: " + out_path);
  out << content;
}

std::string rmatrix_text(const std::vector<loopq::Mat2>& mats, const std::string& kind,
                         int first_index) {
  std::string out;
  for (size_t t = 0; t < mats.size(); ++t) {
    out += kind + "[" + std::to_string(first_index + static_cast<int>(t)) +
           "] = " + mats[t].str() + "\n";
  }
  return out;
}

struct CommonOpts {
  std::string format = "text";
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd->add_option("--out", out_path, "Write output to this path instead of stdout");
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-arithmetic engine: loop-group matrix tables, nonvanishing certification,"
               " inequality suites, kappa polynomials, ancestor translation, cocycle values"};
  app.require_subcommand(1);
  int exit_code = kExitPass;

  // rmatrix: tables of R_n or r_l
  auto* rmatrix = app.add_subcommand("rmatrix", "Print a table of R_n or r_l matrices");
  bool want_r = false, want_R = false;
  int rm_max_l = 0, rm_max_n = 0, rm_trunc = -1;
  CommonOpts rm_opts;
  rmatrix->add_flag("--r", want_r, "Logarithm coefficients r_l, l = 1..max-l");
  rmatrix->add_flag("--R", want_R, "Group coefficients R_n, n = 0..max-n");
  rmatrix->add_option("--max-l", rm_max_l, "Largest l for the r table");
  rmatrix->add_option("--max-n", rm_max_n, "Largest n for the R table");
  rmatrix->add_option("--trunc", rm_trunc, "Series truncation order (defaults to max-l)");
  rm_opts.attach(rmatrix);
  rmatrix->callback([&] {
    if (want_r == want_R) throw CLI::ValidationError("rmatrix", "pass exactly one of --r / --R");
    std::vector<loopq::Mat2> mats;
    std::string kind;
    int first_index = 0;
    if (want_r) {
      if (rm_max_l < 1) throw CLI::ValidationError("rmatrix", "--max-l must be >= 1");
      int order = rm_trunc < 0 ? rm_max_l : rm_trunc;
      if (order < rm_max_l)
        throw CLI::ValidationError("rmatrix", "--trunc must be >= --max-l");
      loopq::MatrixSeries r = loopq::series_log(loopq::p1::R_series(order));
      for (int l = 1; l <= rm_max_l; ++l) mats.push_back(r.coeff(l));
      kind = "r";
      first_index = 1;
    } else {
      if (rm_max_n < 0) throw CLI::ValidationError("rmatrix", "--max-n must be >= 0");
      for (int n = 0; n <= rm_max_n; ++n) mats.push_back(loopq::p1::R_matrix(n));
      kind = "R";
    }
    emit(rm_opts.format == "json" ? loopq::p1::rmatrix_json(mats, kind, first_index)
                                  : rmatrix_text(mats, kind, first_index),
         rm_opts.out_path);
  });

  // certify: shape-and-nonvanishing certification of every r_l
  auto* certify = app.add_subcommand("certify", "Certify the shape and nonvanishing of r_l");
  int ct_max_l = 0;
  CommonOpts ct_opts;
  certify->add_option("--max-l", ct_max_l, "Certify l = 1..max-l")->required();
  ct_opts.attach(certify);
  certify->callback([&] {
    if (ct_max_l < 1) throw CLI::ValidationError("certify", "--max-l must be >= 1");
    loopq::p1::CertificationReport report = loopq::p1::certify_nonvanishing(ct_max_l);
    emit(ct_opts.format == "json" ? loopq::p1::certify_json(report)
                                  : loopq::p1::certify_text(report),
         ct_opts.out_path);
    if (!report.pass) exit_code = kExitMathFail;
  });

  // bounds: the finite-range inequality suite
  auto* bounds = app.add_subcommand("bounds", "Run the finite-range inequality suite");
  int bd_max_n = 0;
  CommonOpts bd_opts;
  bounds->add_option("--max-n", bd_max_n, "Largest index checked (>= 9)")->required();
  bd_opts.attach(bounds);
  bounds->callback([&] {
    if (bd_max_n < 9) throw CLI::ValidationError("bounds", "--max-n must be >= 9");
    loopq::p1::BoundsReport report = loopq::p1::bounds_report(bd_max_n);
    emit(bd_opts.format == "json" ? loopq::p1::bounds_json(report)
                                  : loopq::p1::bounds_text(report),
         bd_opts.out_path);
    if (!report.pass) exit_code = kExitMathFail;
  });

  // kpoly: pushforward polynomial in kappa classes
  auto* kpoly = app.add_subcommand("kpoly", "Kappa-class pushforward polynomial");
  std::vector<int> kp_indices;
  CommonOpts kp_opts;
  kpoly->add_option("indices", kp_indices, "Non-negative psi-power indices")
      ->required()
      ->check(CLI::NonNegativeNumber);
  kp_opts.attach(kpoly);
  kpoly->callback([&] {
    loopq::corr::KappaPolynomial poly = loopq::corr::kappa_pushforward(kp_indices);
    emit(kp_opts.format == "json" ? poly.json() : poly.str() + "\n", kp_opts.out_path);
  });

  // translate: descendent-to-ancestor expansion
  auto* translate = app.add_subcommand("translate", "Descendent-to-ancestor expansion");
  int tr_k = 0, tr_lbar = 0, tr_r = 0;
  CommonOpts tr_opts;
  translate->add_option("--k", tr_k, "Descendent power of the lead insertion")
      ->required()
      ->check(CLI::NonNegativeNumber);
  translate->add_option("--lbar", tr_lbar, "Ancestor power of the lead insertion")
      ->required()
      ->check(CLI::NonNegativeNumber);
  translate->add_option("--r", tr_r, "Number of ancestor units to expand (0 <= r <= lbar)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  tr_opts.attach(translate);
  translate->callback([&] {
    if (tr_r > tr_lbar) throw CLI::ValidationError("translate", "--r must be <= --lbar");
    loopq::corr::CorrelatorExpression expr = loopq::corr::descendent_to_ancestor(
        tr_k, tr_lbar, tr_r, {}, loopq::corr::Genus::formal());
    emit(tr_opts.format == "json" ? expr.json() : expr.str() + "\n", tr_opts.out_path);
  });

  // cocycle: commutator defect of a quantized (pp, qq) pair
  auto* cocycle = app.add_subcommand("cocycle", "Commutator defect of a quantized (pp, qq) pair");
  std::vector<int> cc_pp, cc_qq;
  CommonOpts cc_opts;
  cocycle->add_option("--pp", cc_pp, "p-monomial: i,k (squared) or i,k,j,l")
      ->required()
      ->delimiter(',');
  cocycle->add_option("--qq", cc_qq, "q-monomial: i,k (squared) or i,k,j,l")
      ->required()
      ->delimiter(',');
  cc_opts.attach(cocycle);
  cocycle->callback([&] {
    auto monomial = [](const std::vector<int>& v, loopq::weyl::VarKind kind, const char* name) {
      if (v.size() != 2 && v.size() != 4)
        throw CLI::ValidationError(name, "expected i,k or i,k,j,l");
      for (int x : v)
        if (x < 0) throw CLI::ValidationError(name, "indices must be >= 0");
      loopq::weyl::DarbouxVar a{kind, v[0], v[1]};
      loopq::weyl::DarbouxVar b = v.size() == 2 ? a : loopq::weyl::DarbouxVar{kind, v[2], v[3]};
      loopq::weyl::DarbouxPolynomial p;
      p.add_term({a, b}, loopq::GaussRational(1));
      return p;
    };
    loopq::weyl::DarbouxPolynomial p1 = monomial(cc_pp, loopq::weyl::VarKind::P, "--pp");
    loopq::weyl::DarbouxPolynomial p2 = monomial(cc_qq, loopq::weyl::VarKind::Q, "--qq");
    loopq::weyl::FockOperator defect = loopq::weyl::cocycle_defect(p1, p2);
    if (!defect.is_scalar()) {
      exit_code = kExitMathFail;
      return;
    }
    loopq::GaussRational value = defect.scalar_part();
    emit(cc_opts.format == "json"
             ? std::string("{\n  \"schema\": 1,\n  \"value\": \"") + value.str() + "\"\n}\n"
             : value.str() + "\n",
         cc_opts.out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return exit_code;
}
