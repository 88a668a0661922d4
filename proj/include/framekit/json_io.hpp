#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "framekit/duality.hpp"
#include "framekit/frame.hpp"
#include "framekit/fusion.hpp"
#include "framekit/generators.hpp"
#include "framekit/local_lift.hpp"

namespace framekit::io {

using json = nlohmann::json;

inline json load_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::io_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::parse_error, path + ": " + e.what());
  }
}

inline void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), Errc::io_error, "cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  require(out.good(), Errc::io_error, "failed writing " + path);
}

inline const json& member(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), Errc::parse_error,
          std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::string field_of(const json& j) {
  const json& f = member(j, "field");
  require(f.is_string(), Errc::parse_error, "field \"field\" must be a string");
  const std::string name = f.get<std::string>();
  require(name == "real" || name == "complex", Errc::parse_error,
          "field \"field\" must be \"real\" or \"complex\"");
  return name;
}

/// Complex entries serialize as [re, im]; real-field files use bare numbers.
/// Readers are lenient: a bare number is accepted as a complex entry and a
/// pair with zero imaginary part as a real one.
template <ScalarType S>
S scalar_from_json(const json& e) {
  if constexpr (std::same_as<S, double>) {
    if (e.is_number()) return e.get<double>();
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number() &&
        e[1].get<double>() == 0.0) {
      return e[0].get<double>();
    }
    fail(Errc::parse_error, "expected a real number entry");
  } else {
    if (e.is_number()) return Cplx(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      return Cplx(e[0].get<double>(), e[1].get<double>());
    }
    fail(Errc::parse_error, "expected a complex entry as [re, im]");
  }
}

template <ScalarType S>
json scalar_to_json(S value) {
  if constexpr (std::same_as<S, double>) {
    return json(value);
  } else {
    return json::array({value.real(), value.imag()});
  }
}

/// A matrix written as a list of vectors (each inner array is one column).
template <ScalarType S>
Mat<S> columns_from_json(const json& arr, Index rows, const char* what) {
  require(arr.is_array() && !arr.empty(), Errc::parse_error,
          std::string(what) + " must be a non-empty array of vectors");
  Mat<S> m(rows, static_cast<Index>(arr.size()));
  for (Index c = 0; c < m.cols(); ++c) {
    const json& column = arr[static_cast<std::size_t>(c)];
    require(column.is_array() && static_cast<Index>(column.size()) == rows, Errc::parse_error,
            std::string(what) + ": vector " + std::to_string(c) + " must have length " +
                std::to_string(rows));
    for (Index r = 0; r < rows; ++r) {
      m(r, c) = scalar_from_json<S>(column[static_cast<std::size_t>(r)]);
    }
  }
  return m;
}

template <ScalarType S>
json columns_to_json(const Mat<S>& m) {
  json arr = json::array();
  for (Index c = 0; c < m.cols(); ++c) {
    json column = json::array();
    for (Index r = 0; r < m.rows(); ++r) column.push_back(scalar_to_json<S>(m(r, c)));
    arr.push_back(std::move(column));
  }
  return arr;
}

/// A matrix written in row-major order (used for operator entries).
template <ScalarType S>
Mat<S> rows_from_json(const json& arr, const char* what) {
  require(arr.is_array() && !arr.empty(), Errc::parse_error,
          std::string(what) + " must be a non-empty 2-d array");
  const Index rows = static_cast<Index>(arr.size());
  require(arr[0].is_array() && !arr[0].empty(), Errc::parse_error,
          std::string(what) + " rows must be non-empty arrays");
  const Index cols = static_cast<Index>(arr[0].size());
  Mat<S> m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = arr[static_cast<std::size_t>(r)];
    require(row.is_array() && static_cast<Index>(row.size()) == cols, Errc::parse_error,
            std::string(what) + ": ragged rows");
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = scalar_from_json<S>(row[static_cast<std::size_t>(c)]);
    }
  }
  return m;
}

template <ScalarType S>
json rows_to_json(const Mat<S>& m) {
  json arr = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json<S>(m(r, c)));
    arr.push_back(std::move(row));
  }
  return arr;
}

inline Index dim_of(const json& j) {
  const json& d = member(j, "dim");
  require(d.is_number_unsigned() && d.get<Index>() >= 1, Errc::parse_error,
          "field \"dim\" must be a positive integer");
  return d.get<Index>();
}

template <ScalarType S>
Frame<S> frame_from_json(const json& j) {
  const Index n = dim_of(j);
  return Frame<S>(columns_from_json<S>(member(j, "vectors"), n, "vectors"));
}

template <ScalarType S>
json frame_to_json(const Frame<S>& frame) {
  return json{{"dim", frame.ambient_dim()},
              {"field", std::string(field_name<S>())},
              {"vectors", columns_to_json(frame.vectors())}};
}

/// Subspace bases may be non-orthonormal on input; the loader
/// orthonormalizes, so the stored dimension is the numerical rank.
template <ScalarType S>
FusionFrame<S> fusion_frame_from_json(const json& j, const Tol& tol = {}) {
  const Index n = dim_of(j);
  const json& subspaces_json = member(j, "subspaces");
  require(subspaces_json.is_array() && !subspaces_json.empty(), Errc::parse_error,
          "field \"subspaces\" must be a non-empty array");
  std::vector<Subspace<S>> subspaces;
  subspaces.reserve(subspaces_json.size());
  for (std::size_t i = 0; i < subspaces_json.size(); ++i) {
    Mat<S> spanning = columns_from_json<S>(member(subspaces_json[i], "basis"), n, "basis");
    subspaces.push_back(orthonormal_basis<S>(spanning, tol));
  }
  const json& weights_json = member(j, "weights");
  require(weights_json.is_array() && weights_json.size() == subspaces_json.size(),
          Errc::parse_error, "field \"weights\" must list one weight per subspace");
  std::vector<double> weights;
  weights.reserve(weights_json.size());
  for (const json& w : weights_json) {
    require(w.is_number(), Errc::parse_error, "weights must be numbers");
    weights.push_back(w.get<double>());
  }
  return FusionFrame<S>(std::move(subspaces), std::move(weights));
}

template <ScalarType S>
json fusion_frame_to_json(const FusionFrame<S>& ff) {
  json subspaces = json::array();
  for (Index i = 0; i < ff.size(); ++i) {
    subspaces.push_back(json{{"basis", columns_to_json(ff.subspace(i).basis())}});
  }
  return json{{"dim", ff.ambient_dim()},
              {"field", std::string(field_name<S>())},
              {"subspaces", std::move(subspaces)},
              {"weights", ff.weights()}};
}

inline bool has_local_frames(const json& j) {
  if (!j.is_object() || !j.contains("subspaces") || !j.at("subspaces").is_array()) return false;
  for (const json& s : j.at("subspaces")) {
    if (!s.is_object() || !s.contains("local_frame")) return false;
  }
  return !j.at("subspaces").empty();
}

template <ScalarType S>
LocalFrameSystem<S> local_system_from_json(const json& j, const Tol& tol = {}) {
  require(has_local_frames(j), Errc::parse_error,
          "every subspace entry needs a \"local_frame\" array");
  FusionFrame<S> fusion = fusion_frame_from_json<S>(j, tol);
  const json& subspaces_json = j.at("subspaces");
  std::vector<Frame<S>> locals;
  locals.reserve(subspaces_json.size());
  for (std::size_t i = 0; i < subspaces_json.size(); ++i) {
    locals.emplace_back(columns_from_json<S>(subspaces_json[i].at("local_frame"),
                                             fusion.ambient_dim(), "local_frame"));
  }
  return LocalFrameSystem<S>(std::move(fusion), std::move(locals), tol);
}

template <ScalarType S>
json local_system_to_json(const LocalFrameSystem<S>& system) {
  json j = fusion_frame_to_json(system.fusion());
  for (Index i = 0; i < system.size(); ++i) {
    j["subspaces"][static_cast<std::size_t>(i)]["local_frame"] =
        columns_to_json(system.local_frame(i).vectors());
  }
  return j;
}

/// A coupling-operator file: an explicit matrix, the canonical construction,
/// or a left-inverse recipe (parameter R plus dual weights).
template <ScalarType S>
struct QSpec {
  enum class Kind { matrix, canonical, left_inverse };
  Kind kind = Kind::canonical;
  std::optional<BlockOp<S>> op;            // kind == matrix
  std::optional<Mat<S>> r;                 // kind == left_inverse
  std::optional<std::vector<double>> weights_v;  // kind == left_inverse
};

template <ScalarType S>
QSpec<S> q_spec_from_json(const json& j) {
  const json& kind_json = member(j, "kind");
  require(kind_json.is_string(), Errc::parse_error, "field \"kind\" must be a string");
  const std::string kind = kind_json.get<std::string>();
  QSpec<S> spec;
  if (kind == "canonical") {
    spec.kind = QSpec<S>::Kind::canonical;
    return spec;
  }
  if (kind == "matrix") {
    spec.kind = QSpec<S>::Kind::matrix;
    std::vector<Index> domain = member(j, "domain_layout").get<std::vector<Index>>();
    std::vector<Index> codomain = member(j, "codomain_layout").get<std::vector<Index>>();
    Mat<S> entries = rows_from_json<S>(member(j, "entries"), "entries");
    spec.op = BlockOp<S>(std::move(domain), std::move(codomain), std::move(entries));
    return spec;
  }
  if (kind == "left_inverse") {
    spec.kind = QSpec<S>::Kind::left_inverse;
    spec.r = rows_from_json<S>(member(j, "R"), "R");
    if (j.contains("weights_v")) {
      require(j.at("weights_v").is_array(), Errc::parse_error,
              "field \"weights_v\" must be an array");
      spec.weights_v = j.at("weights_v").get<std::vector<double>>();
    }
    return spec;
  }
  fail(Errc::parse_error, "unknown coupling operator kind \"" + kind + "\"");
}

template <ScalarType S>
json block_op_to_json(const BlockOp<S>& q) {
  return json{{"kind", "matrix"},
              {"field", std::string(field_name<S>())},
              {"domain_layout", q.domain_layout()},
              {"codomain_layout", q.codomain_layout()},
              {"entries", rows_to_json(q.matrix())}};
}

inline GenSpec gen_spec_from_json(const json& j) {
  GenSpec spec;
  const std::string kind = member(j, "kind").get<std::string>();
  if (kind == "sliding_window") {
    spec.kind = GenSpec::Kind::sliding_window;
  } else if (kind == "cyclic_window") {
    spec.kind = GenSpec::Kind::cyclic_window;
  } else if (kind == "random") {
    spec.kind = GenSpec::Kind::random;
  } else {
    fail(Errc::parse_error, "unknown generator kind \"" + kind + "\"");
  }
  spec.dim = dim_of(j);
  if (j.contains("window")) spec.window = j.at("window").get<Index>();
  if (j.contains("k")) spec.k = j.at("k").get<Index>();
  if (j.contains("dims_per_subspace")) {
    spec.dims_per_subspace = j.at("dims_per_subspace").get<std::vector<Index>>();
    if (spec.k == 0) spec.k = static_cast<Index>(spec.dims_per_subspace.size());
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("field")) spec.field = field_of(j);
  return spec;
}

inline json tol_to_json(const Tol& tol) {
  return json{{"identity", tol.identity}, {"rank_factor", tol.rank_factor}, {"psd", tol.psd}};
}

inline json report_to_json(const FusionReport& report, const Tol& tol) {
  return json{{"alpha", report.alpha},
              {"beta", report.beta},
              {"is_fusion_frame", report.is_fusion_frame},
              {"is_tight", report.is_tight},
              {"is_parseval", report.is_parseval},
              {"is_uniform", report.is_uniform},
              {"tol", tol_to_json(tol)}};
}

inline json report_to_json(const DualityReport& report, const Tol& tol) {
  auto residual_check = [](const ResidualCheck& check) {
    return json{{"passed", check.passed}, {"residual", check.residual}};
  };
  auto projection_condition = [](const ProjectionCondition& cond) {
    return json{{"passed", cond.passed},
                {"analysis_injective", cond.analysis_injective},
                {"composite_surjective", cond.composite_surjective},
                {"idempotency_residual", cond.idempotency_residual}};
  };
  return json{{"cond1", residual_check(report.cond1)},
              {"cond2", residual_check(report.cond2)},
              {"cond3", projection_condition(report.cond3)},
              {"cond4", projection_condition(report.cond4)},
              {"cond5", residual_check(report.cond5)},
              {"is_dual", report.is_dual},
              {"swap", residual_check(report.swap_check)},
              {"q_star_dual_of_swap", report.q_star_dual_of_swap},
              {"w_is_fusion_frame", report.w_is_fusion_frame},
              {"v_is_fusion_frame", report.v_is_fusion_frame},
              {"tol", tol_to_json(tol)}};
}

inline json report_to_json(const LocalDualityReport& report, const Tol& tol) {
  auto residual_check = [](const ResidualCheck& check) {
    return json{{"passed", check.passed}, {"residual", check.residual}};
  };
  return json{{"global_dual", residual_check(report.global_dual)},
              {"q_dual", residual_check(report.q_dual)},
              {"agree", report.agree},
              {"tol", tol_to_json(tol)}};
}

}  // namespace framekit::io
