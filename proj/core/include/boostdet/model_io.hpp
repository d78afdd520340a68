#pragma once

#include <string>

#include "boostdet/cascade.hpp"

namespace boostdet {

// Model file: JSON, format_version 1, with the pool digest binding the model
// to the deterministic feature enumeration for its base window. Numbers
// round-trip exactly (shortest decimal that reparses to the same double).
std::string cascade_to_json(const CascadeModel& m);
CascadeModel cascade_from_json(const std::string& text);

void save_cascade(const CascadeModel& m, const std::string& path);
CascadeModel load_cascade(const std::string& path);

// Pool round-trip; feature IDs are enumeration indices and must survive
// serialization bit-exactly.
std::string pool_to_json(const FeaturePool& pool);
FeaturePool pool_from_json(const std::string& text);

std::string digest_hex(std::uint64_t digest);

}  // namespace boostdet
