#pragma once

#include "dqlab/distributions.hpp"
#include "dqlab/linalg.hpp"
#include "dqlab/mrv.hpp"

#include <filesystem>
#include <string>

namespace dqlab {

// Scenario CSV: header row "x1,...,xn[,prob]", one scenario per line.
// Values are written with 17 significant digits so they round-trip exactly;
// the prob column appears only for non-uniform probabilities.
void write_scenario_csv(const std::filesystem::path& path, const ScenarioMatrix& scenarios);
ScenarioMatrix read_scenario_csv(const std::filesystem::path& path);

// Dispersion matrix CSV: n rows of n comma-separated reals, no header.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

// Spectral measure JSON: {"gamma": g, "atoms": [{"s": [...], "p": w}, ...]}.
void write_spectral_json(const std::filesystem::path& path, const SpectralMeasure& psi);
SpectralMeasure read_spectral_json(const std::filesystem::path& path);

} // namespace dqlab
