#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "icedrift/error.hpp"
#include "icedrift/io.hpp"
#include "icedrift/pca.hpp"
#include "icedrift/regions.hpp"
#include "icedrift/spectral.hpp"

namespace icedrift::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord:
    case ErrorCode::EmptyFile:
    case ErrorCode::TooShort:
    case ErrorCode::NoOverlap:
    case ErrorCode::Io:
      return kInputError;
    case ErrorCode::InvalidArgument:
    case ErrorCode::BadRank:
      return kConfigError;
    case ErrorCode::PoleDegenerate:
    case ErrorCode::WindowTooShort:
    case ErrorCode::NonFiniteInput:
    case ErrorCode::DegenerateColumn:
    case ErrorCode::NoConvergence:
    case ErrorCode::NegativeEigenvalue:
    case ErrorCode::ShapeMismatch:
      return kNumericalError;
  }
  return kInputError;
}

namespace {

void emit(std::ostream& err, std::string_view level, std::string_view kind,
          const std::string& message, int code = -1) {
  Json j;
  j[std::string(level)] = kind;
  j["message"] = message;
  if (code >= 0) j["exit_code"] = code;
  err << j.dump() << '\n';
}

int report_error(std::ostream& err, const Error& e) {
  const int code = exit_code_for(e.code());
  emit(err, "error", to_string(e.code()), e.what(), code);
  return code;
}

Json error_json(const Error& e) {
  return Json{{"error", to_string(e.code())}, {"message", e.what()}};
}

std::string write_to_string(auto&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

void write_json(const fs::path& path, const Json& j) { io::write_file(path, j.dump(2) + "\n"); }

Json matrix_json(const Matrix& m) {
  return Json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"layout", "row-major"},
              {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

std::string channel_name(geodesy::Channel c) {
  switch (c) {
    case geodesy::Channel::Zonal: return "zonal";
    case geodesy::Channel::Meridional: return "meridional";
    case geodesy::Channel::Total: break;
  }
  return "total";
}

// ---------------------------------------------------------------------------
// Input loading

struct Source {
  std::string id;
  fs::path path;
};

struct LoadedTrack {
  Source source;
  std::size_t raw_count = 0;
  std::size_t gridded_count = 0;
  std::optional<ingest::Regularized> result;
  std::optional<Error> error;
};

/// Expands directories into their regular files; output sorted by id.
std::vector<Source> collect_sources(const std::vector<fs::path>& inputs, std::vector<Json>& problems) {
  std::vector<Source> out;
  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      for (const auto& entry : fs::directory_iterator(input)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && !name.starts_with("."))
          out.push_back({entry.path().stem().string(), entry.path()});
      }
    } else if (fs::is_regular_file(input, ec)) {
      out.push_back({input.stem().string(), input});
    } else {
      problems.push_back(Json{{"path", input.string()}, {"error", "Io"}, {"message", "no such file or directory"}});
    }
  }
  std::sort(out.begin(), out.end(), [](const Source& a, const Source& b) {
    return a.id != b.id ? a.id < b.id : a.path < b.path;
  });
  return out;
}

LoadedTrack load_one(const Source& source, const RunConfig& config) {
  LoadedTrack loaded{source, 0, 0, std::nullopt, std::nullopt};
  try {
    ingest::ParseOptions options;
    options.format = config.format == InputFormat::Csv ? ingest::Format::GenericCsv
                                                       : ingest::Format::RawLocs;
    options.day_origin = config.day_origin;
    auto fixes = ingest::parse_locations(io::read_file(source.path), options);
    loaded.raw_count = fixes.size();
    std::stable_sort(fixes.begin(), fixes.end(),
                     [](const Fix& a, const Fix& b) { return a.t < b.t; });
    const auto gridded = ingest::round_to_grid(fixes);
    loaded.gridded_count = gridded.size();
    loaded.result = ingest::regularize(gridded, source.id);
  } catch (const Error& e) {
    loaded.error = e;
  } catch (const std::exception& e) {
    loaded.error = Error(ErrorCode::Io, e.what());
  }
  return loaded;
}

struct LoadSet {
  std::vector<LoadedTrack> tracks;
  std::vector<Json> problems;  ///< paths that could not be opened at all
};

LoadSet load_tracks(const RunConfig& config) {
  LoadSet set;
  const auto sources = collect_sources(config.inputs, set.problems);
  set.tracks.resize(sources.size());
  const auto count = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) set.tracks[i] = load_one(sources[i], config);

  std::set<std::string> seen;
  for (auto& t : set.tracks) {
    if (!seen.insert(t.source.id).second && !t.error) {
      t.result.reset();
      t.error = Error(ErrorCode::InvalidArgument, "duplicate track id '" + t.source.id + "'");
    }
  }
  return set;
}

int no_inputs(std::ostream& err) {
  emit(err, "error", "NoInputs", "no input files found", kInputError);
  return kInputError;
}

// ---------------------------------------------------------------------------
// ingest

Json ingest_entry(const LoadedTrack& t) {
  Json j;
  j["id"] = t.source.id;
  j["source"] = t.source.path.filename().string();
  j["raw_count"] = t.raw_count;
  j["gridded_count"] = t.gridded_count;
  if (t.result) {
    const auto& r = *t.result;
    j["status"] = "ok";
    j["region"] = regions::to_string(regions::classify(r.track));
    j["start"] = format_iso8601(r.track.start());
    j["end"] = format_iso8601(r.track.end());
    j["output_count"] = r.track.size();
    j["interpolated_count"] = r.interpolated;
    j["truncated"] = r.truncated_after.has_value();
    j["truncated_after"] = r.truncated_after ? Json(format_iso8601(*r.truncated_after)) : Json(nullptr);
    j["dropped_count"] = r.dropped;
  } else {
    j["status"] = "error";
    j["error"] = to_string(t.error->code());
    j["message"] = t.error->what();
  }
  return j;
}

// ---------------------------------------------------------------------------
// spectrum

Json peaks_json(const spectral::Spectrum& spec, const RunConfig& config) {
  Json list = Json::array();
  auto peaks = spectral::find_peaks(spec, config.prominence_ratio);
  if (peaks.size() > config.max_peaks) peaks.resize(config.max_peaks);
  for (const auto& p : peaks) {
    Json j;
    j["bin"] = p.bin;
    j["freq_uhz"] = p.freq_uhz;
    j["period_h"] = p.bin == 0 ? Json(nullptr) : Json(1e6 / p.freq_uhz / 3600.0);
    j["psd_km2_per_uhz"] = p.psd;
    j["amplitude_km"] = spec.amplitude_km[p.bin];
    list.push_back(j);
  }
  return list;
}

int spectrum_from_series(const RunConfig& config, std::ostream& err) {
  std::vector<Json> problems;
  const auto sources = collect_sources(config.inputs, problems);
  if (sources.empty()) return no_inputs(err);

  int status = problems.empty() ? kOk : kInputError;
  Json tracks = Json::array();
  Json skipped = Json::array();
  for (const auto& p : problems) skipped.push_back(p);
  for (const auto& source : sources) {
    try {
      const auto series = io::parse_series_csv(io::read_file(source.path));
      if (series.times.size() < 2) throw Error(ErrorCode::TooShort, "series needs two samples");
      const UtcSeconds step = series.times[1] - series.times[0];
      for (std::size_t i = 1; i < series.times.size(); ++i)
        if (series.times[i] - series.times[i - 1] != step || step <= 0)
          throw Error(ErrorCode::MalformedRecord, "series is not uniformly sampled");
      const auto spec = spectral::windowed_dft(series.values, static_cast<double>(step));
      io::write_file(config.out_dir / "spectra" / (source.id + ".csv"),
                     write_to_string([&](std::ostream& o) { spectral::write_csv(o, spec); }));
      tracks.push_back(Json{{"id", source.id}, {"n", spec.n}, {"channels", {{"series", peaks_json(spec, config)}}}});
    } catch (const Error& e) {
      emit(err, e.code() == ErrorCode::TooShort ? "warning" : "error", to_string(e.code()),
           source.id + ": " + e.what());
      if (e.code() != ErrorCode::TooShort) status = std::max(status, exit_code_for(e.code()));
      Json s = error_json(e);
      s["id"] = source.id;
      skipped.push_back(s);
    }
  }
  write_json(config.out_dir / "peaks.json",
             Json{{"prominence_ratio", config.prominence_ratio}, {"tracks", tracks}, {"skipped", skipped}});
  return status;
}

// ---------------------------------------------------------------------------
// pca

std::string region_label(RegionSelect r) {
  switch (r) {
    case RegionSelect::Amerasian: return "amerasian";
    case RegionSelect::Eurasian: return "eurasian";
    case RegionSelect::All: return "all";
    case RegionSelect::Auto: break;
  }
  return "auto";
}

struct Group {
  std::string name;
  std::vector<Track> tracks;
};

std::vector<Group> make_groups(const std::vector<Track>& tracks, RegionSelect select) {
  if (select == RegionSelect::All) return {{"all", tracks}};
  auto split = regions::partition(tracks);
  switch (select) {
    case RegionSelect::Amerasian: return {{"amerasian", std::move(split.amerasian)}};
    case RegionSelect::Eurasian: return {{"eurasian", std::move(split.eurasian)}};
    default: break;
  }
  return {{"amerasian", std::move(split.amerasian)}, {"eurasian", std::move(split.eurasian)}};
}

Json run_group(const Group& group, const RunConfig& config) {
  const auto window = ingest::align_tracks(group.tracks);
  const auto ensemble = pca::build_ensemble(window, config.channel);
  const std::size_t p = ensemble.ids.size();
  if (config.k > p)
    throw Error(ErrorCode::BadRank, "k = " + std::to_string(config.k) + " exceeds the " +
                                        std::to_string(p) + " buoys in region " + group.name);

  const auto fitted = pca::fit(ensemble.x, ensemble.ids);
  const auto& model = fitted.model;

  Json rms_by_k = Json::array();
  Matrix chosen;
  for (std::size_t k = 1; k <= p; ++k) {
    const auto scores = pca::project(fitted.z, model.eigvecs, k);
    auto x_hat = pca::reconstruct(scores, model.eigvecs, k, model.mu, model.sigma);
    const auto rms = pca::rms_error(ensemble.x, x_hat);
    Json per_buoy;
    for (std::size_t j = 0; j < p; ++j) per_buoy[ensemble.ids[j]] = rms[j];
    rms_by_k.push_back(Json{{"k", k}, {"rms_error_km", per_buoy}});
    if (k == config.k) chosen = std::move(x_hat);
  }

  // Reconstructed series, the aligned originals, and spectra of the reconstructions.
  const fs::path dir = config.out_dir / group.name;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < p; ++j) columns.push_back(chosen.column(j));
  const auto spectra = spectral::windowed_dft_batch(columns);
  for (std::size_t j = 0; j < p; ++j) {
    const auto& id = ensemble.ids[j];
    const auto original = ensemble.x.column(j);
    io::write_file(dir / "original" / (id + ".csv"), write_to_string([&](std::ostream& o) {
                     io::write_series_csv(o, ensemble.times, original, "displacement_km");
                   }));
    io::write_file(dir / "reconstructed" / (id + ".csv"), write_to_string([&](std::ostream& o) {
                     io::write_series_csv(o, ensemble.times, columns[j], "reconstructed_km");
                   }));
    io::write_file(dir / "reconstructed_spectra" / (id + ".csv"),
                   write_to_string([&](std::ostream& o) { spectral::write_csv(o, spectra[j]); }));
  }

  Json report;
  report["region"] = group.name;
  report["channel"] = channel_name(config.channel);
  report["ids"] = ensemble.ids;
  report["start"] = format_iso8601(ensemble.times.front());
  report["end"] = format_iso8601(ensemble.times.back());
  report["n_samples"] = ensemble.times.size();
  report["k"] = config.k;
  report["mu"] = model.mu;
  report["sigma"] = model.sigma;
  report["eigvals"] = model.eigvals;
  report["explained"] = model.explained;
  report["explained_at_k"] = model.explained[config.k - 1];
  report["eigvecs"] = matrix_json(model.eigvecs);
  report["correlation"] = matrix_json(fitted.correlation);
  report["rms_error_km"] = rms_by_k[config.k - 1]["rms_error_km"];
  report["rms_error_by_k"] = rms_by_k;
  return report;
}

// ---------------------------------------------------------------------------
// argument handling

template <typename Enum>
CLI::Transformer choice(const std::map<std::string, Enum>& m) {
  return CLI::Transformer(m, CLI::ignore_case);
}

void add_common(CLI::App* sub, RunConfig& config, bool allow_series) {
  sub->add_option("-i,--input", config.inputs, "Input files or directories")->required();
  std::map<std::string, InputFormat> formats{{"rawlocs", InputFormat::RawLocs},
                                             {"csv", InputFormat::Csv}};
  if (allow_series) formats.emplace("series", InputFormat::Series);
  sub->add_option("-f,--format", config.format, "Input format")->transform(choice(formats));
  sub->add_option("--day-origin", config.day_origin, "RawLocs day numbering (one|zero)")
      ->transform(choice(std::map<std::string, ingest::DayOrigin>{{"one", ingest::DayOrigin::One},
                                                                  {"zero", ingest::DayOrigin::Zero}}));
  sub->add_option("-o,--out", config.out_dir, "Output directory");
  sub->add_option("--config", "key=value file; command-line flags win");
}

void add_pca_options(CLI::App* sub, RunConfig& config) {
  sub->add_option("--region", config.region, "auto|amerasian|eurasian|all")
      ->transform(choice(std::map<std::string, RegionSelect>{{"auto", RegionSelect::Auto},
                                                             {"amerasian", RegionSelect::Amerasian},
                                                             {"eurasian", RegionSelect::Eurasian},
                                                             {"all", RegionSelect::All}}));
  sub->add_option("--channel", config.channel, "Displacement column used for PCA")
      ->transform(choice(std::map<std::string, geodesy::Channel>{{"total", geodesy::Channel::Total},
                                                                 {"zonal", geodesy::Channel::Zonal},
                                                                 {"meridional", geodesy::Channel::Meridional}}));
  sub->add_option("-k,--k", config.k, "Principal components kept in reconstruction")
      ->check(CLI::PositiveNumber);
}

void add_spectrum_options(CLI::App* sub, RunConfig& config) {
  sub->add_option("--prominence", config.prominence_ratio, "Peak prominence ratio (> 1)")
      ->check(CLI::Validator(
          [](std::string& s) {
            double v = 0.0;
            return CLI::detail::lexical_cast(s, v) && v > 1.0 ? std::string{}
                                                              : std::string{"must be a number > 1"};
          },
          "RATIO>1"));
  sub->add_option("--max-peaks", config.max_peaks, "Peaks listed per channel");
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

/// Splices `key=value` lines from a --config file in front of the user's own
/// flags. Keys already given on the command line are left out.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path) return args;

  std::ifstream in(*path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + *path);
  static const std::map<std::string, std::string> short_forms{
      {"--input", "-i"}, {"--format", "-f"}, {"--out", "-o"}, {"--k", "-k"}};
  auto given = [&](const std::string& flag) {
    const auto alias = short_forms.find(flag);
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      if (alias != short_forms.end() && a.starts_with(alias->second)) return true;
      return a == flag || a.starts_with(flag + "=");
    });
  };
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "line " + std::to_string(line_no) + " is not key=value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    extra.push_back(flag);
    extra.push_back(value);
  }
  // Options go after the subcommand name, which is the first bare word.
  auto at = std::find_if(args.begin(), args.end(), [](const std::string& a) { return !a.starts_with("-"); });
  if (at != args.end()) ++at;
  args.insert(at, extra.begin(), extra.end());
  return args;
}

}  // namespace

int cmd_ingest(const RunConfig& config, std::ostream& err) {
  auto set = load_tracks(config);
  if (set.tracks.empty()) return no_inputs(err);

  int status = set.problems.empty() ? kOk : kInputError;
  Json entries = Json::array();
  for (const auto& p : set.problems) {
    emit(err, "error", "Io", p["path"].get<std::string>() + ": no such file or directory");
    entries.push_back(p);
  }
  for (const auto& t : set.tracks) {
    entries.push_back(ingest_entry(t));
    if (t.error) {
      emit(err, "error", to_string(t.error->code()), t.source.id + ": " + t.error->what());
      status = std::max(status, exit_code_for(t.error->code()));
      continue;
    }
    io::write_file(config.out_dir / "gridded" / (t.source.id + ".csv"),
                   write_to_string([&](std::ostream& o) { io::write_track_csv(o, t.result->track); }));
  }
  write_json(config.out_dir / "ingest_summary.json", Json{{"tracks", entries}});
  return status;
}

int cmd_spectrum(const RunConfig& config, std::ostream& err) {
  if (config.format == InputFormat::Series) return spectrum_from_series(config, err);

  auto set = load_tracks(config);
  if (set.tracks.empty()) return no_inputs(err);

  int status = set.problems.empty() ? kOk : kInputError;
  Json skipped = Json::array();
  for (const auto& p : set.problems) skipped.push_back(p);

  std::vector<const LoadedTrack*> usable;
  for (const auto& t : set.tracks) {
    if (t.result) {
      usable.push_back(&t);
      continue;
    }
    const bool too_short = t.error->code() == ErrorCode::TooShort;
    emit(err, too_short ? "warning" : "error", to_string(t.error->code()),
         t.source.id + ": " + t.error->what());
    if (!too_short) status = std::max(status, exit_code_for(t.error->code()));
    Json s = error_json(*t.error);
    s["id"] = t.source.id;
    skipped.push_back(s);
  }

  // Two channels per track, spectra computed as one parallel batch.
  std::vector<std::vector<double>> series;
  std::vector<geodesy::DisplacementSeries> displacements;
  Json tracks = Json::array();
  try {
    for (const auto* t : usable) {
      displacements.push_back(geodesy::displacement_series(t->result->track));
      series.push_back(displacements.back().zonal_km);
      series.push_back(displacements.back().meridional_km);
    }
    const auto spectra = spectral::windowed_dft_batch(series);
    for (std::size_t i = 0; i < usable.size(); ++i) {
      const auto& id = usable[i]->source.id;
      const auto& zonal = spectra[2 * i];
      const auto& meridional = spectra[2 * i + 1];
      io::write_file(config.out_dir / "spectra" / (id + "_zonal.csv"),
                     write_to_string([&](std::ostream& o) { spectral::write_csv(o, zonal); }));
      io::write_file(config.out_dir / "spectra" / (id + "_meridional.csv"),
                     write_to_string([&](std::ostream& o) { spectral::write_csv(o, meridional); }));
      Json j;
      j["id"] = id;
      j["region"] = regions::to_string(regions::classify(usable[i]->result->track));
      j["n"] = zonal.n;
      j["channels"] = Json{{"zonal", peaks_json(zonal, config)},
                           {"meridional", peaks_json(meridional, config)}};
      tracks.push_back(j);
    }
  } catch (const Error& e) {
    return report_error(err, e);
  }
  write_json(config.out_dir / "peaks.json",
             Json{{"prominence_ratio", config.prominence_ratio}, {"tracks", tracks}, {"skipped", skipped}});
  return status;
}

int cmd_pca(const RunConfig& config, std::ostream& err) {
  if (config.k < 1) {
    emit(err, "error", "BadRank", "k must be at least 1", kConfigError);
    return kConfigError;
  }
  auto set = load_tracks(config);
  if (set.tracks.empty()) return no_inputs(err);

  std::vector<Track> tracks;
  Json skipped = Json::array();
  for (const auto& p : set.problems) skipped.push_back(p);
  for (const auto& t : set.tracks) {
    if (t.result) {
      tracks.push_back(t.result->track);
    } else {
      emit(err, "warning", to_string(t.error->code()), t.source.id + ": " + t.error->what());
      Json s = error_json(*t.error);
      s["id"] = t.source.id;
      skipped.push_back(s);
    }
  }

  int status = kOk;
  int completed = 0;
  Json groups = Json::array();
  for (const auto& group : make_groups(tracks, config.region)) {
    Json entry{{"region", group.name}, {"count", group.tracks.size()}};
    Json ids = Json::array();
    for (const auto& t : group.tracks) ids.push_back(t.id());
    entry["ids"] = ids;
    if (group.tracks.size() < 2) {
      entry["status"] = "skipped";
      entry["message"] = "fewer than two usable tracks";
      // An explicitly requested region must be analysable.
      if (config.region != RegionSelect::Auto) {
        emit(err, "error", "TooFewTracks",
             "region " + group.name + " has " + std::to_string(group.tracks.size()) +
                 " usable track(s), need 2",
             kInputError);
        status = std::max(status, int(kInputError));
      }
      groups.push_back(entry);
      continue;
    }
    try {
      write_json(config.out_dir / ("pca_" + group.name + ".json"), run_group(group, config));
      entry["status"] = "ok";
      entry["report"] = "pca_" + group.name + ".json";
      ++completed;
    } catch (const Error& e) {
      status = std::max(status, report_error(err, e));
      entry["status"] = "error";
      entry["error"] = to_string(e.code());
      entry["message"] = e.what();
    }
    groups.push_back(entry);
  }
  if (completed == 0 && status == kOk) {
    emit(err, "error", "TooFewTracks", "no region has two usable overlapping tracks", kInputError);
    status = kInputError;
  }
  write_json(config.out_dir / "pca_summary.json",
             Json{{"region", region_label(config.region)},
                  {"channel", channel_name(config.channel)},
                  {"k", config.k},
                  {"groups", groups},
                  {"skipped", skipped}});
  return status;
}

int cmd_synth(const SynthCommand& command, std::ostream& err) {
  try {
    if (command.pair_out) {
      auto [a, b] = synth::generate_pair(command.params, command.pair_noise_sigma_km,
                                         command.pair_seed, command.id, command.pair_id);
      io::write_file(command.out, write_to_string([&](std::ostream& o) { io::write_track_csv(o, a); }));
      io::write_file(*command.pair_out,
                     write_to_string([&](std::ostream& o) { io::write_track_csv(o, b); }));
    } else {
      const auto track = synth::generate(command.params, command.id);
      io::write_file(command.out,
                     write_to_string([&](std::ostream& o) { io::write_track_csv(o, track); }));
    }
  } catch (const Error& e) {
    return report_error(err, e);
  }
  return kOk;
}

int cmd_report(const RunConfig& config, std::ostream& err) {
  {
    std::vector<Json> problems;
    if (collect_sources(config.inputs, problems).empty()) return no_inputs(err);
  }
  auto stage = [&](const std::string& name, auto&& fn) {
    RunConfig c = config;
    c.out_dir = config.out_dir / name;
    return fn(c, err);
  };
  const int ingest_status = stage("ingest", cmd_ingest);
  const int spectrum_status = stage("spectrum", cmd_spectrum);
  const int pca_status = stage("pca", cmd_pca);

  Json inputs = Json::array();
  for (const auto& p : config.inputs) inputs.push_back(p.filename().string());
  write_json(config.out_dir / "report.json",
             Json{{"inputs", inputs},
                  {"channel", channel_name(config.channel)},
                  {"region", region_label(config.region)},
                  {"k", config.k},
                  {"prominence_ratio", config.prominence_ratio},
                  {"stages",
                   {{"ingest", {{"exit_code", ingest_status}, {"summary", "ingest/ingest_summary.json"}}},
                    {"spectrum", {{"exit_code", spectrum_status}, {"peaks", "spectrum/peaks.json"}}},
                    {"pca", {{"exit_code", pca_status}, {"summary", "pca/pca_summary.json"}}}}}});
  return std::max({ingest_status, spectrum_status, pca_status});
}

int run(std::span<const std::string> raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drifter track regularization, displacement spectra and cross-buoy PCA"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

  RunConfig config;
  SynthCommand synth_cmd;
  std::string start_iso = "2020-01-01T00:00:00Z";

  auto* ingest_cmd = app.add_subcommand("ingest", "Regularize raw tracks onto the 30-minute grid");
  add_common(ingest_cmd, config, false);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Hann-windowed DFT of displacement series");
  add_common(spectrum_cmd, config, true);
  add_spectrum_options(spectrum_cmd, config);

  auto* pca_cmd = app.add_subcommand("pca", "Cross-buoy PCA, reconstruction and correlation");
  add_common(pca_cmd, config, false);
  add_pca_options(pca_cmd, config);

  auto* report_cmd = app.add_subcommand("report", "Run ingest, spectrum and pca together");
  add_common(report_cmd, config, false);
  add_spectrum_options(report_cmd, config);
  add_pca_options(report_cmd, config);

  auto* synth_app = app.add_subcommand("synth", "Write a synthetic drift track as GenericCsv");
  auto& sp = synth_cmd.params;
  synth_app->add_option("-o,--out", synth_cmd.out, "Output CSV")->required();
  synth_app->add_option("--id", synth_cmd.id, "Track id");
  synth_app->add_option("--origin-lat", sp.origin.lat, "Start latitude")->required();
  synth_app->add_option("--origin-lon", sp.origin.lon, "Start longitude")->required();
  synth_app->add_option("--start", start_iso, "Start time (ISO-8601, on a half-hour mark)");
  synth_app->add_option("--steps", sp.duration_steps, "Number of 30-minute steps");
  synth_app->add_option("--mean-u", sp.mean_u, "Mean eastward drift, km per step");
  synth_app->add_option("--mean-v", sp.mean_v, "Mean northward drift, km per step");
  synth_app->add_option("--tide-amp", sp.tide_amp_km, "Tidal displacement amplitude, km per step");
  synth_app->add_option("--tide-freq", sp.tide_freq_uhz, "Tidal frequency, uHz");
  synth_app->add_option("--tide-phase", sp.tide_phase_rad, "Tidal phase, rad");
  synth_app->add_option("--noise", sp.noise_sigma_km, "Per-step noise standard deviation, km");
  synth_app->add_option("--seed", sp.seed, "PRNG seed");
  synth_app->add_option("--pair-out", synth_cmd.pair_out, "Also write a co-located second track");
  synth_app->add_option("--pair-id", synth_cmd.pair_id, "Id of the second track");
  synth_app->add_option("--pair-noise", synth_cmd.pair_noise_sigma_km, "Noise of the second track, km");
  synth_app->add_option("--pair-seed", synth_cmd.pair_seed, "Seed of the second track");
  synth_app->add_option("--config", "key=value file; command-line flags win");

  try {
    auto args = apply_config_file(std::vector<std::string>(raw_args.begin(), raw_args.end()));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit(err, "error", "ConfigError", e.what(), kConfigError);
    return kConfigError;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*ingest_cmd) return cmd_ingest(config, err);
    if (*spectrum_cmd) return cmd_spectrum(config, err);
    if (*pca_cmd) return cmd_pca(config, err);
    if (*report_cmd) return cmd_report(config, err);
    if (*synth_app) {
      const auto t = parse_iso8601(start_iso);
      if (!t) {
        emit(err, "error", "ConfigError", "bad --start timestamp", kConfigError);
        return kConfigError;
      }
      sp.origin.t = *t;
      return cmd_synth(synth_cmd, err);
    }
  } catch (const Error& e) {
    return report_error(err, e);
  } catch (const std::exception& e) {
    emit(err, "error", "Io", e.what(), kInputError);
    return kInputError;
  }
  return kConfigError;
}

}  // namespace icedrift::cli
