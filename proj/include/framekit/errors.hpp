#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framekit {

enum class Errc {
  zero_span,
  field_mismatch,
  shape_mismatch,
  layout_mismatch,
  not_hermitian,
  not_a_frame,
  not_a_fusion_frame,
  not_a_left_inverse,
  not_in_subspace,
  degenerate_block,
  weight_error,
  bad_window,
  infeasible_spec,
  index_mismatch,
  parse_error,
  io_error,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::zero_span: return "ZeroSpan";
    case Errc::field_mismatch: return "FieldMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::layout_mismatch: return "LayoutMismatch";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::not_a_frame: return "NotAFrame";
    case Errc::not_a_fusion_frame: return "NotAFusionFrame";
    case Errc::not_a_left_inverse: return "NotALeftInverse";
    case Errc::not_in_subspace: return "NotInSubspace";
    case Errc::degenerate_block: return "DegenerateBlock";
    case Errc::weight_error: return "WeightError";
    case Errc::bad_window: return "BadWindow";
    case Errc::infeasible_spec: return "InfeasibleSpec";
    case Errc::index_mismatch: return "IndexMismatch";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace framekit
