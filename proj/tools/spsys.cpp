// Copyright 2026 The spsys Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// spsys command-line front end.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 only inconclusive
// results besides passes, 3 input error.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spsys/io.hpp"
#include "spsys/spsys.hpp"

namespace {

using spsys::CMatrix;
using spsys::Complex;
using spsys::Index;
using spsys::io::json;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInput = 3;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

// Collects inputs and checks, then prints the JSON report.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  std::string read_input(const fs::path& p) {
    std::string text = spsys::io::read_file(p);
    digest_src_ += p.filename().string();
    digest_src_.push_back('\0');
    digest_src_ += text;
    digest_src_.push_back('\0');
    return text;
  }

  json load_input(const fs::path& p) { return spsys::io::parse_json(read_input(p), p.string()); }

  void add(const std::string& id, std::pair<std::size_t, std::size_t> window, double residual, double threshold,
           std::optional<bool> pass = std::nullopt) {
    std::string verdict;
    if (!std::isfinite(residual))
      verdict = "inconclusive";
    else
      verdict = pass.value_or(residual <= threshold) ? "pass" : "fail";
    checks_.push_back({{"check", id},
                       {"window", json::array({window.first, window.second})},
                       {"residual", std::isfinite(residual) ? json(residual) : json(nullptr)},
                       {"threshold", threshold},
                       {"verdict", verdict},
                       {"pass", verdict == "pass"}});
    std::cerr << verdict << "  " << id << "  residual " << residual << " (threshold " << threshold << ")\n";
  }

  void add_verdict(const std::string& id, const std::string& verdict) {
    checks_.push_back({{"check", id}, {"verdict", verdict}, {"pass", verdict == "pass"}});
    std::cerr << verdict << "  " << id << "\n";
  }

  json& extra() { return extra_; }

  int finish() const {
    json out = {{"tool", "spsys"},
                {"version", SPSYS_VERSION},
                {"command", command_},
                {"input_digest", sha256_hex(digest_src_)},
                {"checks", checks_}};
    for (auto it = extra_.begin(); it != extra_.end(); ++it) out[it.key()] = it.value();
    std::cout << out.dump(2) << "\n";
    bool fail = false, inconclusive = false;
    for (const auto& c : checks_) {
      fail = fail || c["verdict"] == "fail";
      inconclusive = inconclusive || c["verdict"] == "inconclusive";
    }
    return fail ? kExitFail : inconclusive ? kExitInconclusive : kExitPass;
  }

 private:
  std::string command_;
  std::string digest_src_;
  json checks_ = json::array();
  json extra_ = json::object();
};

struct Common {
  std::string spec;
  std::optional<std::size_t> depth;
  double tol = 1e-9;
  std::size_t budget_mb = 2048;

  std::size_t budget_bytes() const { return budget_mb << 20; }
};

struct Loaded {
  spsys::io::SystemSpecFile file;
  std::size_t depth;
};

Loaded load_spec(Report& rep, const Common& c) {
  if (c.spec.empty()) throw spsys::InputError("--spec is required");
  auto file = spsys::io::system_spec_from_json(rep.load_input(c.spec), c.spec);
  std::size_t N = c.depth ? *c.depth : file.depth.value_or(0);
  if (N < 1) throw spsys::InputError("depth must be given (--depth or \"depth\" in the spec) and be >= 1");
  return {std::move(file), N};
}

// Fails fast when d^N * h complex entries exceed the budget.
void guard_budget(int d, std::size_t N, Index h, const Common& c) {
  long double bytes = std::pow(static_cast<long double>(d), static_cast<long double>(N)) *
                      static_cast<long double>(h) * static_cast<long double>(sizeof(Complex));
  if (bytes > static_cast<long double>(c.budget_bytes())) {
    std::ostringstream s;
    s << "depth " << N << " with d = " << d << ", h = " << h << " needs about "
      << static_cast<double>(bytes / (1 << 20)) << " MiB, budget is " << c.budget_mb << " MiB (--budget-mb)";
    throw spsys::BudgetError(s.str());
  }
}

spsys::SubproductSystem build(Report& rep, const Common& c, Loaded* out = nullptr, Index h = 1) {
  Loaded L = load_spec(rep, c);
  guard_budget(L.file.d, L.depth, h, c);
  auto X = spsys::io::build_system(L.file, L.depth, c.tol, c.spec);
  if (out) *out = std::move(L);
  return X;
}

json dims_json(const spsys::SubproductSystem& X) {
  json a = json::array();
  for (Index n : X.dims()) a.push_back(n);
  return a;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

spsys::CVector parse_vector(const std::string& s, Index d) {
  auto parts = split(s, ',');
  if (static_cast<Index>(parts.size()) != d)
    throw spsys::InputError("--unit: expected " + std::to_string(d) + " comma-separated entries");
  spsys::CVector v(d);
  for (Index i = 0; i < d; ++i) {
    try {
      v(i) = std::stod(parts[static_cast<std::size_t>(i)]);
    } catch (const std::exception&) {
      throw spsys::InputError("--unit: cannot parse \"" + parts[static_cast<std::size_t>(i)] + "\"");
    }
  }
  return v;
}

int cmd_build(const Common& c, const std::string& out) {
  Report rep("build");
  Loaded L;
  auto X = build(rep, c, &L);
  rep.extra()["system"] = {{"d", X.d()}, {"depth", X.depth()}, {"kind", L.file.kind}, {"dims", dims_json(X)}};
  if (!out.empty()) {
    json levels = json::array();
    for (std::size_t n = 1; n <= X.depth(); ++n)
      levels.push_back({{"n", n},
                        {"left", spsys::io::matrix_to_json(X.left_inclusion(n))},
                        {"right", spsys::io::matrix_to_json(X.right_inclusion(n))}});
    std::ofstream f(out);
    if (!f) throw spsys::InputError("cannot write " + out);
    f << json({{"d", X.d()}, {"depth", X.depth()}, {"dims", dims_json(X)}, {"levels", levels}}).dump() << "\n";
    rep.extra()["out"] = out;
  }
  std::cerr << "dims:";
  for (Index n : X.dims()) std::cerr << " " << n;
  std::cerr << "\n";
  return rep.finish();
}

int cmd_dims(const Common& c) {
  Report rep("dims");
  auto X = build(rep, c);
  auto dims = X.dims();
  for (std::size_t n = 0; n < dims.size(); ++n) std::cout << (n ? " " : "") << dims[n];
  std::cout << "\n";
  return kExitPass;
}

int cmd_verify(const Common& c, const std::string& checks, const std::string& unit) {
  Report rep("verify");
  Loaded L;
  auto X = build(rep, c, &L);
  const std::size_t N = X.depth();
  std::optional<spsys::TruncatedFock> F;
  std::optional<spsys::ShiftSet> S;
  auto shifts = [&]() -> const spsys::ShiftSet& {
    if (!S) {
      F.emplace(X);
      S.emplace(spsys::build_shifts(*F));
    }
    return *S;
  };
  auto list = split(checks, ',');
  if (list.empty()) throw spsys::InputError("--checks: empty list");
  for (const auto& name : list) {
    if (name == "axioms") {
      auto a = spsys::verify_axioms(X, c.tol, c.budget_bytes());
      rep.add("axioms", {1, N}, a.max_residual, c.tol);
    } else if (name == "defect") {
      shifts();
      for (std::size_t k = 1; k < N; ++k) {
        auto d = spsys::check_defect(*F, *S, k);
        rep.add("defect k=" + std::to_string(k), {0, d.window_hi}, d.residual, 1e-10);
      }
    } else if (name == "subshift") {
      if (L.file.kind != "subshift") throw spsys::InputError("check subshift needs a spec of kind subshift");
      std::vector<spsys::Letters> words;
      for (std::size_t k = 0; k < L.file.body["forbidden"].size(); ++k)
        words.push_back(spsys::io::word_from_json(L.file.body["forbidden"][k], X.d(), "forbidden"));
      spsys::SubshiftSpec spec(X.d(), words);
      if (N < spec.step() + 2)
        throw spsys::InputError("check subshift needs depth >= " + std::to_string(spec.step() + 2));
      shifts();
      auto s = spsys::subshift_relations(*F, *S, spec);
      double worst = s.max_cross;
      for (double v : s.defect_leak) worst = std::max(worst, v);
      rep.add("subshift cross", {0, N}, s.max_cross, 1e-12);
      double leak = 0.0;
      for (double v : s.defect_leak) leak = std::max(leak, v);
      rep.add("subshift defect support", {0, s.window_hi}, leak, 1e-10);
      rep.add("subshift cuntz", {0, N - 1}, s.cuntz_residual, 1e-10);
    } else if (name == "unit") {
      spsys::CVector v;
      if (!unit.empty()) {
        v = parse_vector(unit, X.d());
      } else if (L.file.body.contains("unit")) {
        const json& u = L.file.body["unit"];
        if (!u.is_array() || static_cast<Index>(u.size()) != X.d())
          throw spsys::InputError(c.spec + ".unit: expected " + std::to_string(X.d()) + " entries");
        v.resize(X.d());
        for (Index i = 0; i < X.d(); ++i)
          v(i) = spsys::io::detail::to_complex(u[static_cast<std::size_t>(i)], c.spec + ".unit");
      } else {
        throw spsys::InputError("check unit needs --unit or a \"unit\" entry in the spec");
      }
      auto u = spsys::verify_unit(X, v, c.tol, c.budget_bytes());
      double worst = 0.0;
      for (double r : u.residuals) worst = std::max(worst, r);
      rep.add("unit", {1, N}, worst, c.tol * std::max(1.0, std::pow(v.norm(), static_cast<double>(N))), u.is_unit);
    } else {
      throw spsys::InputError("--checks: unknown check \"" + name + "\" (axioms, defect, subshift, unit)");
    }
  }
  rep.extra()["dims"] = dims_json(X);
  return rep.finish();
}

int cmd_shift(const Common& c, const std::string& out) {
  if (out.empty()) throw spsys::InputError("shift: --out directory is required");
  Report rep("shift");
  auto X = build(rep, c);
  spsys::TruncatedFock F(X);
  auto S = spsys::build_shifts(F);
  json files = json::array();
  for (const auto& p : spsys::io::export_shifts(S, out)) files.push_back(p.string());
  rep.extra()["files"] = files;
  rep.extra()["fock_dim"] = F.total_dim();
  std::cerr << "wrote " << files.size() << " matrices of size " << F.total_dim() << " to " << out << "\n";
  return rep.finish();
}

spsys::RepTuple load_rep(Report& rep, const std::string& path) {
  if (path.empty()) throw spsys::InputError("--rep is required");
  try {
    return spsys::io::rep_from_json(rep.load_input(path), path);
  } catch (const spsys::InputError&) {
    throw;
  } catch (const spsys::Error& e) {
    throw spsys::InputError(path + ": " + e.what());
  }
}

int cmd_check_rep(const Common& c, const std::string& rep_path) {
  Report rep("check-rep");
  auto T = load_rep(rep, rep_path);
  auto X = build(rep, c, nullptr, T.h());
  if (T.d() != X.d()) throw spsys::InputError("rep has " + std::to_string(T.d()) + " matrices, system has d = " +
                                              std::to_string(X.d()));
  auto r = spsys::is_representation(X, T, std::nullopt, 1e-8);
  rep.add("row contraction", {0, 0}, std::max(0.0, T.row_norm() - 1.0), 1e-12);
  rep.add("representation", {1, X.depth()}, r.max_residual, 1e-8, r.pass);
  rep.extra()["row_norm"] = T.row_norm();
  rep.extra()["level_residuals"] = r.residuals;
  return rep.finish();
}

int cmd_poisson(const Common& c, const std::string& rep_path, double r) {
  Report rep("poisson");
  auto T = load_rep(rep, rep_path);
  auto X = build(rep, c, nullptr, T.h());
  if (T.d() != X.d()) throw spsys::InputError("rep and system have different d");
  if (!(r > 0.0 && r < 1.0)) throw spsys::InputError("--r must lie in (0, 1)");
  if (T.row_norm() > 1.0 + 1e-12) throw spsys::InputError("rep is not a row contraction");
  auto memb = spsys::is_representation(X, T);
  rep.add("representation", {1, X.depth()}, memb.max_residual, 1e-8, memb.pass);
  spsys::TruncatedFock F(X);
  auto S = spsys::build_shifts(F);
  auto P = spsys::poisson_kernel(X, T, r);
  std::vector<spsys::Letters> words{{}};
  for (int i = 1; i <= X.d(); ++i) words.push_back({i});
  for (int i = 1; i <= X.d(); ++i)
    for (int j = 1; j <= X.d(); ++j) words.push_back({i, j});
  for (const auto& a : words)
    for (const auto& b : words) {
      if (a.size() + b.size() > 2 || a.size() + b.size() + 1 > X.depth()) continue;
      auto t = spsys::check_poisson_transform(P, S, T, a, b);
      rep.add("transform " + (a.empty() ? std::string("1") : spsys::word_to_string(a)) + "|" +
                  (b.empty() ? std::string("1") : spsys::word_to_string(b)),
              {0, X.depth()}, t.residual, t.bound, t.pass);
    }
  return rep.finish();
}

int cmd_piece(const Common& c, const std::string& rep_path, const std::string& ambient) {
  Report rep("piece");
  auto T = load_rep(rep, rep_path);
  auto X = build(rep, c, nullptr, T.h());
  spsys::SubproductSystem Y = spsys::full_system(X.d(), X.depth());
  if (!ambient.empty()) {
    Common ca = c;
    ca.spec = ambient;
    Y = build(rep, ca, nullptr, T.h());
  }
  if (T.d() != X.d() || Y.d() != X.d()) throw spsys::InputError("rep, system and ambient need the same d");
  auto memb = spsys::is_representation(Y, T);
  rep.add("representation of ambient", {1, Y.depth()}, memb.max_residual, 1e-8, memb.pass);
  auto res = spsys::maximal_piece(X, Y, T, c.tol);
  rep.extra()["piece_dim"] = res.piece.dim();
  rep.extra()["h"] = T.h();
  rep.extra()["iterations"] = res.iterations;
  rep.extra()["piece"] = spsys::io::matrix_to_json(res.piece.frame());
  std::cerr << "maximal piece: dim " << res.piece.dim() << " of " << T.h() << "\n";
  return rep.finish();
}

CMatrix load_matrix(Report& rep, const std::string& path) {
  return spsys::io::matrix_from_json(rep.load_input(path), path);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

int cmd_classify(const std::string& kind, const std::string& a_path, const std::string& b_path,
                 unsigned seed) {
  Report rep("classify " + kind);
  CMatrix A = load_matrix(rep, a_path), B = load_matrix(rep, b_path);
  if (kind == "qmat") {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
      throw spsys::InputError("q matrices must be square of the same size");
    spsys::QEquivalence e;
    try {
      e = spsys::q_equivalent(A, B);
    } catch (const spsys::Error& err) {
      throw spsys::InputError(err.what());
    }
    rep.extra()["verdict"] = e.equivalent ? "yes" : "no";
    rep.extra()["residual"] = e.residual;
    if (e.sigma) rep.extra()["sigma"] = *e.sigma;
    rep.extra()["character_set_a"] = spsys::character_set_descriptor(A).describe();
    rep.extra()["character_set_b"] = spsys::character_set_descriptor(B).describe();
    std::cerr << "q-equivalent: " << (e.equivalent ? "yes" : "no") << "\n";
    return rep.finish();
  }
  if (kind == "quad") {
    if (A.rows() != 2 || A.cols() != 2 || B.rows() != 2 || B.cols() != 2)
      throw spsys::InputError("quad classification takes 2 x 2 matrices");
    spsys::QuadSearchOptions opt;
    opt.seed = seed;
    auto q = spsys::quad_equivalent(A, B, opt);
    rep.extra()["verdict"] = spsys::to_string(q.verdict);
    rep.extra()["stage"] = q.stage;
    if (q.lambda) rep.extra()["lambda"] = complex_json(*q.lambda);
    if (q.U) rep.extra()["U"] = spsys::io::matrix_to_json(*q.U);
    if (q.U) rep.extra()["residual"] = q.residual;
    auto inv = [](const spsys::QuadInvariants& i) {
      return json{{"rank", i.rank}, {"rank_sym", i.rank_sym}, {"rank_antisym", i.rank_antisym},
                  {"sigma_ratio", i.sigma_ratio}};
    };
    rep.extra()["invariants_a"] = inv(q.inv_a);
    rep.extra()["invariants_b"] = inv(q.inv_b);
    if (q.canonical_q_a) rep.extra()["canonical_q_a"] = *q.canonical_q_a;
    if (q.canonical_q_b) rep.extra()["canonical_q_b"] = *q.canonical_q_b;
    rep.extra()["search"] = {{"starts", q.starts}, {"iterations", q.iterations}, {"seed", seed}};
    std::cerr << "quad-equivalent: " << spsys::to_string(q.verdict) << " (" << q.stage << ")\n";
    int code = rep.finish();
    return q.verdict == spsys::QuadVerdict::Inconclusive ? kExitInconclusive : code;
  }
  throw spsys::InputError("classify: kind must be qmat or quad");
}

int cmd_strong_commute(const std::string& p_path, const std::string& q_path) {
  Report rep("cp strong-commute");
  rep.read_input(p_path);
  rep.read_input(q_path);
  auto P = spsys::io::load_stochastic(p_path);
  auto Q = spsys::io::load_stochastic(q_path);
  if (P.n() != Q.n()) throw spsys::InputError("stochastic matrices have different sizes");
  auto s = spsys::strong_commute_stochastic(P, Q);
  rep.extra()["commute"] = s.commute;
  rep.extra()["strong"] = s.strong;
  rep.extra()["commute_residual"] = s.commute_residual;
  json w = json::array();
  for (const auto& x : s.witness)
    w.push_back({{"i", x.i}, {"k", x.k}, {"count_qp", x.count_qp}, {"count_pq", x.count_pq}});
  rep.extra()["witness"] = w;
  std::cerr << "commute " << (s.commute ? "true" : "false") << ", strong " << (s.strong ? "true" : "false") << "\n";
  return rep.finish();
}

int cmd_as_dims(const std::string& kraus_path, std::size_t n) {
  if (kraus_path.empty()) throw spsys::InputError("--kraus is required");
  if (n < 1) throw spsys::InputError("--n must be >= 1");
  Report rep("cp as-dims");
  auto C = spsys::io::channel_from_json(rep.load_input(kraus_path), kraus_path);
  auto f = spsys::as_fiber_dims(C, n);
  rep.extra()["dims"] = f.dims;
  rep.extra()["submultiplicative"] = f.submultiplicative;
  rep.extra()["contractive"] = C.contractive();
  std::cerr << "dims:";
  for (Index k : f.dims) std::cerr << " " << k;
  std::cerr << "\n";
  return rep.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subproduct systems: build, verify, export, classify"};
  app.set_version_flag("--version", std::string(SPSYS_VERSION));
  app.require_subcommand(1);

  Common c;
  std::string out, checks = "axioms,defect", unit, rep_path, ambient, kraus, a_path, b_path, p_path, q_path;
  double r = 0.8;
  unsigned seed = 20260;
  std::size_t n = 5;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--spec", c.spec, "system spec (JSON)");
    s->add_option("--depth", c.depth, "truncation depth N")->check(CLI::PositiveNumber);
    s->add_option("--tol", c.tol, "tolerance")->check(CLI::PositiveNumber);
    s->add_option("--budget-mb", c.budget_mb, "memory budget in MiB")->check(CLI::PositiveNumber);
    s->add_option("--seed", seed, "search seed");
  };

  auto* build_cmd = app.add_subcommand("build", "build a system and report its dimensions");
  add_common(build_cmd);
  build_cmd->add_option("--out", out, "write inclusions to this file");
  auto* dims_cmd = app.add_subcommand("dims", "print dim X(0..N)");
  add_common(dims_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "run verification checks");
  add_common(verify_cmd);
  verify_cmd->add_option("--checks", checks, "comma list of axioms,defect,subshift,unit");
  verify_cmd->add_option("--unit", unit, "unit vector, comma-separated");
  auto* shift_cmd = app.add_subcommand("shift", "export the truncated shift");
  add_common(shift_cmd);
  shift_cmd->add_option("--out", out, "output directory");
  auto* check_rep_cmd = app.add_subcommand("check-rep", "check a representation");
  add_common(check_rep_cmd);
  check_rep_cmd->add_option("--rep", rep_path, "representation (JSON)");
  auto* poisson_cmd = app.add_subcommand("poisson", "Poisson transform checks");
  add_common(poisson_cmd);
  poisson_cmd->add_option("--rep", rep_path, "representation (JSON)");
  poisson_cmd->add_option("--r", r, "radius in (0, 1)");
  auto* piece_cmd = app.add_subcommand("piece", "maximal piece of a representation");
  add_common(piece_cmd);
  piece_cmd->add_option("--rep", rep_path, "representation of the ambient system (JSON)");
  piece_cmd->add_option("--ambient", ambient, "ambient system spec, default full");

  auto* classify_cmd = app.add_subcommand("classify", "isomorphism of d = 2 systems");
  classify_cmd->require_subcommand(1);
  auto* qmat_cmd = classify_cmd->add_subcommand("qmat", "q-commuting systems");
  qmat_cmd->add_option("q", a_path, "first q matrix")->required();
  qmat_cmd->add_option("r", b_path, "second q matrix")->required();
  auto* quad_cmd = classify_cmd->add_subcommand("quad", "single quadratic relation");
  quad_cmd->add_option("A", a_path, "first 2x2 matrix")->required();
  quad_cmd->add_option("B", b_path, "second 2x2 matrix")->required();
  quad_cmd->add_option("--seed", seed, "search seed");

  auto* cp_cmd = app.add_subcommand("cp", "CP map tools");
  cp_cmd->require_subcommand(1);
  auto* sc_cmd = cp_cmd->add_subcommand("strong-commute", "strong commutation of stochastic matrices");
  sc_cmd->add_option("P", p_path, "first matrix (CSV or JSON)")->required();
  sc_cmd->add_option("Q", q_path, "second matrix (CSV or JSON)")->required();
  auto* as_cmd = cp_cmd->add_subcommand("as-dims", "fiber dimensions of iterated channels");
  as_cmd->add_option("--kraus", kraus, "channel (JSON)");
  as_cmd->add_option("--n", n, "number of iterates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  if (const char* t = std::getenv("SPSYS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(t, &end, 10);
    if (end == t || *end != '\0' || v < 1) {
      std::cerr << "error: SPSYS_THREADS must be a positive integer\n";
      return kExitInput;
    }
  }

  try {
    if (*build_cmd) return cmd_build(c, out);
    if (*dims_cmd) return cmd_dims(c);
    if (*verify_cmd) return cmd_verify(c, checks, unit);
    if (*shift_cmd) return cmd_shift(c, out);
    if (*check_rep_cmd) return cmd_check_rep(c, rep_path);
    if (*poisson_cmd) return cmd_poisson(c, rep_path, r);
    if (*piece_cmd) return cmd_piece(c, rep_path, ambient);
    if (*qmat_cmd) return cmd_classify("qmat", a_path, b_path, seed);
    if (*quad_cmd) return cmd_classify("quad", a_path, b_path, seed);
    if (*sc_cmd) return cmd_strong_commute(p_path, q_path);
    if (*as_cmd) return cmd_as_dims(kraus, n);
  } catch (const spsys::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const spsys::BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kExitInput;
  } catch (const spsys::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
