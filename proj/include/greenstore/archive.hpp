// Copyright 2026 The GreenStore Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GREENSTORE_ARCHIVE_HPP
#define GREENSTORE_ARCHIVE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "greenstore/metrics.hpp"
#include "greenstore/palette.hpp"
#include "greenstore/png.hpp"
#include "greenstore/raster.hpp"

namespace greenstore {

inline constexpr std::size_t kScaleFactor = 4;

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

struct ArchiveManifest {
  std::string object_id;
  std::string source_name;
  std::size_t original_width = 0;
  std::size_t original_height = 0;
  std::uint64_t original_bytes = 0;
  std::uint64_t stored_bytes = 0;
  double dither_scale = 1.0;
  std::size_t palette_size = 256;
  std::size_t scale_factor = kScaleFactor;
  std::string codec;
  std::string created_at;  // ISO 8601, UTC

  friend bool operator==(const ArchiveManifest&, const ArchiveManifest&) = default;
};

void to_json(nlohmann::json& j, const ArchiveManifest& m);
void from_json(const nlohmann::json& j, ArchiveManifest& m);

struct UpscalerBackend {
  enum class Kind { NativeLanczos3, ExternalCommand };
  Kind kind = Kind::NativeLanczos3;
  std::string command_template;

  static UpscalerBackend native() { return {}; }
  static UpscalerBackend external(std::string command) { return {Kind::ExternalCommand, std::move(command)}; }
  /// "native" or "external:<command>"; InvalidConfig otherwise.
  static UpscalerBackend parse(const std::string& spec);
};

/// 4x upscale through `backend`. The external protocol: run
/// `<command_template> <abs input.png> <abs output.png>` with
/// GREENSTORE_SCALE=4 set; exit 0 and a decodable PNG of exactly 4x the input
/// dimensions is success, anything else is BackendFailure.
RasterImage upscale_with(const RasterImage& img, const UpscalerBackend& backend);

struct StoredObject {
  std::vector<std::uint8_t> bytes;
  std::string codec;
  std::size_t width = 0;   // stored (downscaled) dimensions
  std::size_t height = 0;
};

/// quantize + dither, 4x Lanczos3 downscale, then PNG. The encoder switches
/// to indexed color whenever the downscaled RGB image still fits a palette.
StoredObject prepare_for_storage(const RasterImage& img, const DitherConfig& cfg, int compression_effort = 9);

/// Decode, upscale by 4 through `backend`, center-crop to the original size.
RasterImage reconstruct(std::span<const std::uint8_t> stored, std::size_t original_width,
                        std::size_t original_height, const UpscalerBackend& backend);

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<std::string> problems;
  bool ok() const noexcept { return problems.empty(); }
};

/// Content-addressed local object store:
///
///   <root>/blobs/<object_id>.png   immutable blobs
///   <root>/manifest.jsonl          one ArchiveManifest per line
///
/// Writers serialise on an advisory lock and publish through
/// write-temp-then-rename, so readers always see a complete manifest and
/// every manifest row refers to a blob already on disk.
class ObjectStore {
 public:
  /// Opens (creating if needed) the store at `root`. StorageError on IO failure.
  explicit ObjectStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path blob_path(const std::string& object_id) const;

  /// Runs the storage pipeline on `image_file` and records it. Archiving the
  /// same file with the same config again returns the existing row.
  ArchiveManifest archive(const std::filesystem::path& image_file, const DitherConfig& cfg);

  /// Looks up a row by exact object id, then by source name.
  /// NotFound / AmbiguousName on failure.
  ArchiveManifest resolve(const std::string& id_or_name) const;

  RasterImage retrieve(const std::string& object_id, const UpscalerBackend& backend) const;

  std::vector<ArchiveManifest> entries() const;

  /// Re-hashes every blob against its manifest row.
  VerifyReport verify() const;

 private:
  void append(const ArchiveManifest& row);

  std::filesystem::path root_;
};

struct EvaluationRow {
  std::string dataset;
  DitherConfig config;
  std::size_t images = 0;
  QualityReport report;  // mean PSNR/SSIM, summed sizes
};

void to_json(nlohmann::json& j, const EvaluationRow& r);
void from_json(const nlohmann::json& j, EvaluationRow& r);

/// PNG files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> list_pngs(const std::filesystem::path& dir);

/// One row per config over every PNG in `dir`. EmptyDataset when there are none.
std::vector<EvaluationRow> evaluate_dataset(const std::filesystem::path& dir, std::span<const DitherConfig> cfgs,
                                            const UpscalerBackend& backend);

}  // namespace greenstore

#endif  // GREENSTORE_ARCHIVE_HPP
