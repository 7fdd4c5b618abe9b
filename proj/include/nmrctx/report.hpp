#pragma once

#include <filesystem>
#include <string>

#include "nmrctx/grape.hpp"
#include "nmrctx/inequality.hpp"

namespace nmrctx {

// Writes to a sibling temporary file, then renames over the destination.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// "%.<digits>g"
std::string format_number(double v, int digits);

// Header "beta,eta,value", one row per grid point; angles to 12 significant digits.
std::string sweep_csv(const SweepResult& r);
std::string sweep_summary_json(const SweepResult& r);

// Heatmap on a fixed [-2 sqrt 2, 2 sqrt 2] diverging scale with |I| = 2 contours.
std::string sweep_svg(const SweepResult& r);

std::string state_independent_json(const StateIndependentTerms& t, const std::string& state_label,
                                   EvalPath via, const std::optional<NoiseParams>& noise);

std::string bounds_report(const NCHVBoundReport& chsh, const NCHVBoundReport& state_independent);

// Header "segment,channel,amplitude,phase" (rad/s, rad; segment and channel 1-based).
std::string controls_csv(const ControlSequence& c);
std::string grape_json(const std::string& target_name, const GrapeConfig& config,
                       const GrapeResult& result, const RobustnessReport& robustness);

}  // namespace nmrctx
