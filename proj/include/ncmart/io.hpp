#pragma once

#include <string>

#include <json.hpp>

#include "ncmart/decompose.hpp"
#include "ncmart/filtration.hpp"

namespace ncmart {

using Json = nlohmann::json;

/// {"dim": d, "rows": [[...], ...]}
Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

/// {"kind": ..., "dim": d, "levels": N, "params": {...}}
Json filtration_to_json(const Filtration& f);
FiltrationPtr filtration_from_json(const Json& j);

/// {"filtration": {...}, "final": matrix}
Json martingale_to_json(const Martingale& x);
Martingale martingale_from_json(const Json& j);

Json adapted_to_json(const AdaptedSequence& s);

/// Per-level pieces plus the reconstruction residuals.
Json decomposition_to_json(const Martingale& y, const GundyDecomposition& g);
Json decomposition_to_json(const Martingale& y, const TripleDecomposition& t);
Json decomposition_to_json(const Martingale& y, const SquareDecomposition& s);
Json decomposition_to_json(const Martingale& y, const DavisTriple& t);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace ncmart
