// File-driven front end: load frames, fusion frames and coupling operators
// from JSON, run the validations and constructions, and emit text or JSON
// reports.
//
// Exit codes: 0 success (valid / dual), 1 mathematical failure (not a fusion
// frame / not dual), 2 input error (I/O, parse, shape or layout problems).

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framekit/framekit.hpp"

namespace {

using framekit::BlockOp;
using framekit::Cplx;
using framekit::Errc;
using framekit::Error;
using framekit::FusionFrame;
using framekit::Index;
using framekit::LeftInverse;
using framekit::Mat;
using framekit::Tol;
using json = framekit::io::json;

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitInputError = 2;

struct Options {
  Tol tol;
  std::uint64_t seed = 0x51ab5eed;
  std::string format = "text";
};

template <class Fn>
int with_field(const std::string& field, Fn&& fn) {
  if (field == "real") return fn.template operator()<double>();
  return fn.template operator()<Cplx>();
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

void emit(const Options& opt, const json& report, const std::string& text) {
  if (opt.format == "json") {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << text << '\n';
  }
}

int cmd_validate(const Options& opt, const std::string& path) {
  json j = framekit::io::load_file(path);
  const std::string field = framekit::io::field_of(j);
  return with_field(field, [&]<typename S>() {
    FusionFrame<S> ff = framekit::io::fusion_frame_from_json<S>(j, opt.tol);
    framekit::FusionReport report = framekit::validate(ff, opt.tol);
    char text[256];
    std::snprintf(text, sizeof(text),
                  "alpha=%.10g beta=%.10g fusion_frame=%s tight=%s parseval=%s uniform=%s",
                  report.alpha, report.beta, bool_str(report.is_fusion_frame).c_str(),
                  bool_str(report.is_tight).c_str(), bool_str(report.is_parseval).c_str(),
                  bool_str(report.is_uniform).c_str());
    emit(opt, framekit::io::report_to_json(report, opt.tol), text);
    return report.is_fusion_frame ? kExitOk : kExitMathFailure;
  });
}

std::vector<double> parse_weight_list(const std::string& text, std::size_t count) {
  std::vector<double> weights;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t next = text.find(',', at);
    if (next == std::string::npos) next = text.size();
    try {
      weights.push_back(std::stod(text.substr(at, next - at)));
    } catch (const std::exception&) {
      framekit::fail(Errc::parse_error, "cannot parse weight list \"" + text + "\"");
    }
    at = next + 1;
  }
  if (weights.size() == 1 && count > 1) weights.assign(count, weights.front());
  framekit::require(weights.size() == count, Errc::parse_error,
                    "expected " + std::to_string(count) + " dual weights");
  return weights;
}

struct DualArgs {
  std::string input;
  std::string mode = "canonical";
  std::string r_path;
  std::string weights;
  std::string out;
  std::string out_q;
};

std::string default_q_path(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".q.json";
  }
  return out + ".q.json";
}

int cmd_dual(const Options& opt, const DualArgs& args) {
  json j = framekit::io::load_file(args.input);
  const std::string field = framekit::io::field_of(j);
  return with_field(field, [&]<typename S>() {
    FusionFrame<S> ff = framekit::io::fusion_frame_from_json<S>(j, opt.tol);
    framekit::FusionDual<S> result = [&] {
      if (args.mode == "canonical") return framekit::canonical_dual(ff, opt.tol);
      framekit::require(args.mode == "left_inverse", Errc::parse_error,
                        "mode must be canonical or left_inverse");
      Mat<S> r;
      if (args.r_path.empty()) {
        r = Mat<S>::Zero(ff.ambient_dim(), ff.total_block_dim());
      } else {
        json rj = framekit::io::load_file(args.r_path);
        const json& entries = rj.is_object() && rj.contains("R") ? rj.at("R") : rj;
        r = framekit::io::rows_from_json<S>(entries, "R");
      }
      LeftInverse<S> a = framekit::parametrized_left_inverse(ff, r, opt.tol);
      std::vector<double> v = args.weights.empty()
                                  ? ff.weights()
                                  : parse_weight_list(args.weights,
                                                      static_cast<std::size_t>(ff.size()));
      return framekit::dual_from_left_inverse(ff, a, v, opt.tol);
    }();

    framekit::ResidualCheck check = framekit::verify_q_dual(ff, result.dual, result.q, opt.tol);
    framekit::io::save_file(args.out, framekit::io::fusion_frame_to_json(result.dual));
    const std::string q_path = args.out_q.empty() ? default_q_path(args.out) : args.out_q;
    framekit::io::save_file(q_path, framekit::io::block_op_to_json(result.q));

    json report{{"reconstruction_residual", check.residual},
                {"dual_path", args.out},
                {"q_path", q_path},
                {"tol", framekit::io::tol_to_json(opt.tol)}};
    char text[160];
    std::snprintf(text, sizeof(text), "reconstruction_residual=%.3e", check.residual);
    emit(opt, report, text);
    return check.passed ? kExitOk : kExitMathFailure;
  });
}

/// Builds the coupling operator a verify run needs. Explicit matrices are
/// used as-is; the canonical and left_inverse kinds rebuild A from the
/// analysis side and express each block in the synthesis side's stored
/// bases, so verification is meaningful for any V file.
template <typename S>
BlockOp<S> coupling_from_spec(const framekit::io::QSpec<S>& spec, const FusionFrame<S>& w,
                              const FusionFrame<S>& v, const Tol& tol) {
  using Kind = typename framekit::io::QSpec<S>::Kind;
  if (spec.kind == Kind::matrix) return *spec.op;
  LeftInverse<S> a = spec.kind == Kind::canonical
                         ? framekit::canonical_left_inverse(w, tol)
                         : framekit::parametrized_left_inverse(w, *spec.r, tol);
  std::vector<double> weights = w.weights();
  if (spec.kind == Kind::left_inverse && spec.weights_v) weights = *spec.weights_v;
  framekit::require(weights.size() == static_cast<std::size_t>(v.size()), Errc::layout_mismatch,
                    "dual weight count does not match the synthesis side");
  std::vector<Mat<S>> blocks;
  blocks.reserve(static_cast<std::size_t>(w.size()));
  framekit::require(w.size() == v.size(), Errc::layout_mismatch,
                    "subspace counts differ between the two families");
  for (Index i = 0; i < w.size(); ++i) {
    blocks.push_back((v.subspace(i).basis().adjoint() * a.block(i)) / S(weights[i]));
  }
  return BlockOp<S>::block_diagonal(w.block_dims(), v.block_dims(), blocks);
}

int cmd_verify(const Options& opt, const std::string& path_w, const std::string& path_v,
               const std::string& path_q) {
  json jw = framekit::io::load_file(path_w);
  json jv = framekit::io::load_file(path_v);
  json jq = framekit::io::load_file(path_q);
  const std::string field = framekit::io::field_of(jw);
  framekit::require(framekit::io::field_of(jv) == field, Errc::field_mismatch,
                    "analysis and synthesis sides use different scalar fields");
  if (jq.is_object() && jq.contains("field")) {
    framekit::require(framekit::io::field_of(jq) == field, Errc::field_mismatch,
                      "coupling operator uses a different scalar field");
  }
  return with_field(field, [&]<typename S>() {
    FusionFrame<S> w = framekit::io::fusion_frame_from_json<S>(jw, opt.tol);
    FusionFrame<S> v = framekit::io::fusion_frame_from_json<S>(jv, opt.tol);
    framekit::io::QSpec<S> spec = framekit::io::q_spec_from_json<S>(jq);
    BlockOp<S> q = coupling_from_spec(spec, w, v, opt.tol);
    framekit::DualityReport report =
        framekit::duality_equivalences(w, v, q, opt.tol, 32, opt.seed);

    std::string text;
    char line[256];
    std::snprintf(line, sizeof(line), "cond1=%s residual=%.3e\n", bool_str(report.cond1.passed).c_str(),
                  report.cond1.residual);
    text += line;
    std::snprintf(line, sizeof(line), "cond2=%s residual=%.3e\n", bool_str(report.cond2.passed).c_str(),
                  report.cond2.residual);
    text += line;
    std::snprintf(line, sizeof(line), "cond3=%s idempotency_residual=%.3e\n",
                  bool_str(report.cond3.passed).c_str(), report.cond3.idempotency_residual);
    text += line;
    std::snprintf(line, sizeof(line), "cond4=%s idempotency_residual=%.3e\n",
                  bool_str(report.cond4.passed).c_str(), report.cond4.idempotency_residual);
    text += line;
    std::snprintf(line, sizeof(line), "cond5=%s residual=%.3e\n", bool_str(report.cond5.passed).c_str(),
                  report.cond5.residual);
    text += line;
    std::snprintf(line, sizeof(line), "is_dual=%s swap=%s", bool_str(report.is_dual).c_str(),
                  bool_str(report.q_star_dual_of_swap).c_str());
    text += line;
    emit(opt, framekit::io::report_to_json(report, opt.tol), text);
    return report.is_dual ? kExitOk : kExitMathFailure;
  });
}

int cmd_local_lift(const Options& opt, const std::string& path_w, const std::string& path_v) {
  json jw = framekit::io::load_file(path_w);
  json jv = framekit::io::load_file(path_v);
  framekit::require(framekit::io::has_local_frames(jw), Errc::parse_error,
                    path_w + ": every subspace needs a \"local_frame\" entry");
  framekit::require(framekit::io::has_local_frames(jv), Errc::parse_error,
                    path_v + ": every subspace needs a \"local_frame\" entry");
  const std::string field = framekit::io::field_of(jw);
  framekit::require(framekit::io::field_of(jv) == field, Errc::field_mismatch,
                    "the two systems use different scalar fields");
  return with_field(field, [&]<typename S>() {
    framekit::LocalFrameSystem<S> w = framekit::io::local_system_from_json<S>(jw, opt.tol);
    framekit::LocalFrameSystem<S> v = framekit::io::local_system_from_json<S>(jv, opt.tol);
    framekit::LocalDualityReport report = framekit::local_duality_check(w, v, opt.tol);
    char text[256];
    std::snprintf(text, sizeof(text),
                  "global_dual=%s q_dual=%s agree=%s residual_global=%.3e residual_q=%.3e",
                  bool_str(report.global_dual.passed).c_str(), bool_str(report.q_dual.passed).c_str(),
                  bool_str(report.agree).c_str(), report.global_dual.residual,
                  report.q_dual.residual);
    emit(opt, framekit::io::report_to_json(report, opt.tol), text);
    return (report.global_dual.passed && report.q_dual.passed) ? kExitOk : kExitMathFailure;
  });
}

struct GenArgs {
  std::string kind;
  Index dim = 0;
  Index window = 0;
  Index k = 0;
  std::vector<Index> dims;
  std::uint64_t seed = 0;
  std::string field = "complex";
  std::string out;
};

int cmd_gen(const Options& opt, const GenArgs& args) {
  framekit::GenSpec spec;
  if (args.kind == "sliding_window") {
    spec.kind = framekit::GenSpec::Kind::sliding_window;
  } else if (args.kind == "cyclic_window") {
    spec.kind = framekit::GenSpec::Kind::cyclic_window;
  } else if (args.kind == "random") {
    spec.kind = framekit::GenSpec::Kind::random;
  } else {
    framekit::fail(Errc::parse_error, "unknown generator kind \"" + args.kind + "\"");
  }
  spec.dim = args.dim;
  spec.window = args.window;
  spec.k = args.k;
  spec.dims_per_subspace = args.dims;
  if (spec.k == 0 && !spec.dims_per_subspace.empty()) {
    spec.k = static_cast<Index>(spec.dims_per_subspace.size());
  }
  spec.seed = args.seed;
  spec.field = args.field;
  framekit::require(spec.field == "real" || spec.field == "complex", Errc::parse_error,
                    "field must be real or complex");
  return with_field(spec.field, [&]<typename S>() {
    FusionFrame<S> ff = framekit::make_fusion_frame<S>(spec, opt.tol);
    json j = framekit::io::fusion_frame_to_json(ff);
    if (args.out.empty()) {
      std::cout << j.dump(2) << '\n';
    } else {
      framekit::io::save_file(args.out, j);
    }
    return kExitOk;
  });
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::not_a_frame:
    case Errc::not_a_fusion_frame:
      return kExitMathFailure;
    default:
      return kExitInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusion frame construction and duality verification toolkit"};
  app.require_subcommand(1);

  Options opt;
  double tol_override = -1.0;
  app.add_option("--tol", tol_override, "identity-residual tolerance (default 1e-8)");
  app.add_option("--seed", opt.seed, "seed for sampled checks");
  app.add_option("--format", opt.format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  auto* validate = app.add_subcommand("validate", "compute fusion frame bounds and flags");
  std::string validate_input;
  validate->add_option("input", validate_input, "fusion frame JSON file")->required();

  auto* dual = app.add_subcommand("dual", "construct a dual fusion frame");
  DualArgs dual_args;
  dual->add_option("input", dual_args.input, "fusion frame JSON file")->required();
  dual->add_option("--mode", dual_args.mode, "canonical or left_inverse")
      ->check(CLI::IsMember({"canonical", "left_inverse"}));
  dual->add_option("--R", dual_args.r_path, "JSON file with the parameter matrix R");
  dual->add_option("--v", dual_args.weights, "dual weights (comma separated, or one value)");
  dual->add_option("--out", dual_args.out, "output path for the dual fusion frame")->required();
  dual->add_option("--out-q", dual_args.out_q, "output path for the coupling operator");

  auto* verify = app.add_subcommand("verify", "run the duality equivalence suite");
  std::string verify_w, verify_v, verify_q;
  verify->add_option("W", verify_w, "analysis-side fusion frame JSON")->required();
  verify->add_option("V", verify_v, "synthesis-side fusion frame JSON")->required();
  verify->add_option("Q", verify_q, "coupling operator JSON")->required();

  auto* local_lift = app.add_subcommand("local-lift", "check duality lifted from local frames");
  std::string lift_w, lift_v;
  local_lift->add_option("W", lift_w, "system JSON with local_frame entries")->required();
  local_lift->add_option("V", lift_v, "system JSON with local_frame entries")->required();

  auto* gen = app.add_subcommand("gen", "emit a generated fusion frame as JSON");
  GenArgs gen_args;
  gen->add_option("--kind", gen_args.kind, "sliding_window, cyclic_window or random")->required();
  gen->add_option("--dim", gen_args.dim, "ambient dimension")->required();
  gen->add_option("--window", gen_args.window, "window width for the window kinds");
  gen->add_option("--k", gen_args.k, "subspace count for the random kind");
  gen->add_option("--dims", gen_args.dims, "subspace dimensions")->delimiter(',');
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--field", gen_args.field, "real or complex (default complex)");
  gen->add_option("--out", gen_args.out, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (tol_override > 0.0) opt.tol.identity = tol_override;
  if (tol_override == 0.0 || tol_override < -1.0 || (tol_override != -1.0 && tol_override <= 0.0)) {
    std::cerr << "error: --tol must be strictly positive\n";
    return kExitInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt, validate_input);
    if (dual->parsed()) return cmd_dual(opt, dual_args);
    if (verify->parsed()) return cmd_verify(opt, verify_w, verify_v, verify_q);
    if (local_lift->parsed()) return cmd_local_lift(opt, lift_w, lift_v);
    if (gen->parsed()) return cmd_gen(opt, gen_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
