#include "entangleid/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace entangleid::io {

namespace {

// Rethrows a domain construction failure as the invariant complaint the
// document layer promises; parse-shape errors pass through untouched.
[[noreturn]] void rethrow_as_invariant(const Error& e, const std::string& where) {
  if (e.code() == Errc::ParseError) throw e;
  throw Error(Errc::InvariantViolation, where + " rejected: " + e.what());
}

Eigen::VectorXd read_number_array(const json& arr, const std::string& key) {
  if (!arr.is_array() || arr.empty())
    throw Error(Errc::ParseError, "\"" + key + "\" must be a nonempty array");
  Eigen::VectorXd v(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw Error(Errc::ParseError,
                  "\"" + key + "\"[" + std::to_string(i) + "] is not a number");
    v(static_cast<Index>(i)) = arr[i].get<double>();
  }
  return v;
}

}  // namespace

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

json load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read state file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const Error& e) {
    // Error::what() already carries the code prefix; strip it so the rewrap
    // with the file path does not repeat it.
    std::string inner = e.what();
    std::string prefix = std::string(errc_name(e.code())) + ": ";
    if (inner.rfind(prefix, 0) == 0) inner = inner.substr(prefix.size());
    throw Error(e.code(), path + ": " + inner);
  }
}

StateDocument state_from_document(const json& doc, const ToleranceConfig& tol,
                                  SpectrumPolicy policy) {
  if (!doc.is_object()) throw Error(Errc::ParseError, "state document must be a JSON object");
  bool has_schmidt = doc.contains("schmidt");
  bool has_amplitudes = doc.contains("amplitudes") || doc.contains("dims");
  if (has_schmidt == has_amplitudes)
    throw Error(Errc::ParseError,
                "state document needs exactly one of \"schmidt\" or \"dims\"+\"amplitudes\"");

  StateDocument out;
  if (has_schmidt) {
    Eigen::VectorXd w = read_number_array(doc.at("schmidt"), "schmidt");
    try {
      out.spectrum = (policy == SpectrumPolicy::Weights)
                         ? normalize_and_sort(w, tol)
                         : SchmidtVector::from_probabilities(w, tol);
    } catch (const Error& e) {
      rethrow_as_invariant(e, "schmidt array");
    }
    return out;
  }

  if (!doc.contains("dims") || !doc.contains("amplitudes"))
    throw Error(Errc::ParseError, "amplitude form needs both \"dims\" and \"amplitudes\"");
  const json& dims = doc.at("dims");
  if (!dims.is_array() || dims.size() != 2 || !dims[0].is_number_integer() ||
      !dims[1].is_number_integer())
    throw Error(Errc::ParseError, "\"dims\" must be a pair of integers");
  Index rows = dims[0].get<Index>();
  Index cols = dims[1].get<Index>();
  if (rows < 1 || cols < 1) throw Error(Errc::ParseError, "\"dims\" entries must be positive");

  const json& amps = doc.at("amplitudes");
  if (!amps.is_array() || amps.size() != static_cast<std::size_t>(rows * cols))
    throw Error(Errc::ParseError,
                "\"amplitudes\" must list exactly dims[0]*dims[1] = " +
                    std::to_string(rows * cols) + " entries");
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const json& pair = amps[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw Error(Errc::ParseError,
                  "\"amplitudes\"[" + std::to_string(i) + "] must be a [re, im] pair");
    Index idx = static_cast<Index>(i);
    m(idx / cols, idx % cols) = std::complex<double>(pair[0].get<double>(), pair[1].get<double>());
  }
  try {
    out.state = BipartitePureState::from_amplitudes(std::move(m), tol);
  } catch (const Error& e) {
    rethrow_as_invariant(e, "amplitude matrix");
  }
  return out;
}

SchmidtVector as_spectrum(const StateDocument& doc, const ToleranceConfig& tol) {
  if (doc.spectrum) return *doc.spectrum;
  return schmidt_spectrum(*doc.state, tol);
}

SchmidtVector load_spectrum(const std::string& path, const ToleranceConfig& tol,
                            SpectrumPolicy policy) {
  return as_spectrum(state_from_document(load_document(path), tol, policy), tol);
}

double round_sig(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json number(double x) { return json(round_sig(x)); }

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(number(v(i)));
  return arr;
}

json spectrum_json(const SchmidtVector& v) { return vector_json(v.probs()); }

json report(const std::string& command, json inputs, json result) {
  return json{{"command", command},
              {"inputs", std::move(inputs)},
              {"result", std::move(result)},
              {"tool_version", version_string}};
}

std::string render(const json& report) { return report.dump(2) + "\n"; }

}  // namespace entangleid::io
