#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icedrift/error.hpp"
#include "icedrift/geodesy.hpp"
#include "icedrift/ingest.hpp"
#include "icedrift/synth.hpp"

namespace icedrift::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

/// Exit status a library error maps onto.
int exit_code_for(ErrorCode code);

enum class InputFormat { RawLocs, Csv, Series };
enum class RegionSelect { Auto, Amerasian, Eurasian, All };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  InputFormat format = InputFormat::RawLocs;
  ingest::DayOrigin day_origin = ingest::DayOrigin::One;
  RegionSelect region = RegionSelect::Auto;
  geodesy::Channel channel = geodesy::Channel::Total;
  std::size_t k = 2;
  std::filesystem::path out_dir = "out";
  double prominence_ratio = 3.0;
  std::size_t max_peaks = 20;
};

struct SynthCommand {
  synth::SynthParams params;
  std::string id = "synth";
  std::filesystem::path out;
  /// Second, co-located track from generate_pair when set.
  std::optional<std::filesystem::path> pair_out;
  std::string pair_id = "synth_b";
  double pair_noise_sigma_km = 0.0;
  std::uint64_t pair_seed = 1;
};

/// Every command writes its files under the configured output directory and
/// reports problems as one JSON object per line on `err`.
int cmd_ingest(const RunConfig& config, std::ostream& err);
int cmd_spectrum(const RunConfig& config, std::ostream& err);
int cmd_pca(const RunConfig& config, std::ostream& err);
int cmd_synth(const SynthCommand& command, std::ostream& err);
/// ingest, spectrum and pca into <out>/ingest, <out>/spectrum, <out>/pca plus <out>/report.json.
int cmd_report(const RunConfig& config, std::ostream& err);

/// Parses `args` (without the program name) and dispatches.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace icedrift::cli
