#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "choquard/forms.hpp"
#include "choquard/radial_function.hpp"
#include "choquard/regimes.hpp"
#include "choquard/supersolutions.hpp"

namespace choquard::io {

using nlohmann::json;

inline constexpr const char* kSchema = "1";

regimes::Existence parse_existence(const std::string& s);

json to_json(const regimes::DecayRate& d);
regimes::DecayRate decay_from_json(const json& j);

json to_json(const regimes::Verdict& v);
// Throws DomainError on a missing or different schema tag or malformed fields.
regimes::Verdict verdict_from_json(const json& j);

json to_json(const Envelope& e);
Envelope envelope_from_json(const json& j);

// Header `r,value`, 17 significant digits in scientific notation.
void write_csv(const RadialFunction& f, std::ostream& out);
// Reads the CSV written by write_csv; the tail comes from the sidecar.
RadialFunction read_csv(std::istream& in, const Envelope& tail = {});
// Envelope and inner radius.
json sidecar(const RadialFunction& f);

json to_json(const supersolutions::ResidualReport& r);
// Header `r,residual,normalized`.
void write_csv(const supersolutions::ResidualReport& r, std::ostream& out);

json to_json(const forms::FormReport& r);

// Stable formatting: two-space indent and a trailing newline.
std::string dump(const json& j);

}  // namespace choquard::io
