#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/models.hpp"

namespace kkwin {

/// CSV schemas (header row mandatory, columns in declared order):
///   NK:        omega_eV,n,k
///   EPS:       omega_eV,eps1,eps2
///   LAMBDA_NK: lambda_um,n,k
enum class FileSchema { kNk, kEps, kLambdaNk };

FileSchema schema_from_string(const std::string& s);
std::string schema_to_string(FileSchema s);

/// Loads, converts (EPS via the principal square root, LAMBDA_NK via
/// omega[eV] = 1.239841984 / lambda[um]), sorts by omega and validates.
/// Distinct errors for a missing file, a malformed row (with line number),
/// duplicate frequencies after sorting, n <= 0 and k < 0.
OpticalDataset load_dataset(const std::filesystem::path& path, FileSchema schema,
                            WarningLog* warnings = nullptr);

/// Union of the samples minus the excluded [lo, hi) intervals; overlapping
/// frequencies resolved by list order (first dataset wins, with a warning).
/// Provenance runs are recorded in the merged dataset's source_meta.
OpticalDataset merge_datasets(const std::vector<OpticalDataset>& sets,
                              const std::vector<std::pair<Frequency, Frequency>>&
                                  exclusions = {},
                              WarningLog* warnings = nullptr);

/// Model behind a named synthetic fixture.
struct SyntheticSpec {
  DrudeParams drude;
  std::vector<LorentzOscillator> oscillators;
  std::string name;
};

/// Known presets: "drude-gold" (pure Drude, omega_p = 9 eV/hbar,
/// gamma = 35 meV/hbar) and "drude-lorentz-gold" (plus the two interband
/// fixture oscillators). Throws ValidationError for unknown names.
SyntheticSpec synthetic_preset(const std::string& name);

/// Writes the model tabulated on the grid as an NK-schema file.
/// Deterministic; values round-trip through load_dataset to 1e-12.
void emit_synthetic(const SyntheticSpec& spec, const std::vector<Frequency>& grid,
                    const std::filesystem::path& path);

}  // namespace kkwin
