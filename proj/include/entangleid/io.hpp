#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "entangleid/schmidt.hpp"
#include "entangleid/types.hpp"

namespace entangleid::io {

using json = nlohmann::json;

// Parsed state file.  Exactly one member holds a value, matching which of the
// two document forms was present.
struct StateDocument {
  std::optional<SchmidtVector> spectrum;
  std::optional<BipartitePureState> state;
};

// A "schmidt" array is normally a strict probability vector; the lenient
// policy treats it as raw nonnegative weights to canonicalize instead.
enum class SpectrumPolicy { Strict, Weights };

// Raw JSON parse with file context; parse failures carry the byte position.
json load_document(const std::string& path);
json parse_document(const std::string& text);

// Document to domain object.  Shape problems are ParseError; a document that
// is well shaped but violates a domain invariant (normalization, negativity)
// is InvariantViolation with the underlying complaint embedded.
StateDocument state_from_document(const json& doc, const ToleranceConfig& tol,
                                  SpectrumPolicy policy = SpectrumPolicy::Strict);

// Spectrum view of either document form; the amplitude form is decomposed.
SchmidtVector as_spectrum(const StateDocument& doc, const ToleranceConfig& tol);

SchmidtVector load_spectrum(const std::string& path, const ToleranceConfig& tol,
                            SpectrumPolicy policy = SpectrumPolicy::Strict);

// Doubles rounded to 12 significant digits before insertion, so serialized
// reports are byte-stable across platforms and rebuilds.
double round_sig(double x);
json number(double x);
json vector_json(const Eigen::VectorXd& v);
json spectrum_json(const SchmidtVector& v);

json report(const std::string& command, json inputs, json result);
std::string render(const json& report);

}  // namespace entangleid::io
