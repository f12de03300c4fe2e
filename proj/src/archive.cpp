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

#include "greenstore/archive.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/file.h>
#include <sys/wait.h>
#include <unistd.h>

#include <openssl/evp.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

#include "greenstore/error.hpp"
#include "greenstore/resample.hpp"

extern char** environ;

namespace greenstore {
namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const noexcept { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(ErrorCode::StorageError, what + ": " + std::strerror(errno));
}

void fsync_dir(const fs::path& dir) {
  FileDescriptor fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY));
  if (fd.get() >= 0) ::fsync(fd.get());
}

/// Writes `bytes` to a temp file beside `target`, fsyncs, and renames it
/// into place.
void write_atomically(const fs::path& target, std::span<const std::uint8_t> bytes) {
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644));
    if (fd.get() < 0) storage_failure("cannot create " + tmp.string());
    std::size_t off = 0;
    while (off < bytes.size()) {
      const ssize_t n = ::write(fd.get(), bytes.data() + off, bytes.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        const int saved = errno;
        ::unlink(tmp.c_str());
        errno = saved;
        storage_failure("cannot write " + tmp.string());
      }
      off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd.get()) != 0) {
      ::unlink(tmp.c_str());
      storage_failure("cannot sync " + tmp.string());
    }
  }
  if (::rename(tmp.c_str(), target.c_str()) != 0) {
    ::unlink(tmp.c_str());
    storage_failure("cannot publish " + target.string());
  }
  fsync_dir(target.parent_path());
}

class StoreLock {
 public:
  explicit StoreLock(const fs::path& root) : fd_(::open((root / ".lock").c_str(), O_RDWR | O_CREAT, 0644)) {
    if (fd_.get() < 0) storage_failure("cannot open store lock");
    while (::flock(fd_.get(), LOCK_EX) != 0)
      if (errno != EINTR) storage_failure("cannot lock store");
  }
  ~StoreLock() { ::flock(fd_.get(), LOCK_UN); }

 private:
  FileDescriptor fd_;
};

class TempDir {
 public:
  TempDir() {
    std::string pattern = (fs::temp_directory_path() / "greenstore-XXXXXX").string();
    if (::mkdtemp(pattern.data()) == nullptr) storage_failure("cannot create temp dir");
    path_ = pattern;
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

int run_command(const std::string& command_template, const fs::path& in, const fs::path& out) {
  const std::string script = command_template + " \"$1\" \"$2\"";
  std::vector<std::string> args = {"/bin/sh", "-c", script, "greenstore-upscaler", in.string(), out.string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  for (char** e = environ; *e != nullptr; ++e)
    if (std::string_view(*e).rfind("GREENSTORE_SCALE=", 0) != 0) env_storage.emplace_back(*e);
  env_storage.push_back("GREENSTORE_SCALE=" + std::to_string(kScaleFactor));
  std::vector<char*> envp;
  for (auto& e : env_storage) envp.push_back(e.data());
  envp.push_back(nullptr);

  pid_t pid = 0;
  if (::posix_spawn(&pid, "/bin/sh", nullptr, nullptr, argv.data(), envp.data()) != 0)
    throw Error(ErrorCode::BackendFailure, "cannot launch upscaler: " + command_template);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0)
    if (errno != EINTR) throw Error(ErrorCode::BackendFailure, "lost upscaler process");
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

bool fits_palette(const RasterImage& img) {
  if (img.has_alpha()) return false;
  std::vector<std::uint32_t> colors;
  colors.reserve(img.pixel_count());
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const auto d = img.data().subspan(i * 3, 3);
    colors.push_back(Rgb{d[0], d[1], d[2]}.packed());
  }
  std::sort(colors.begin(), colors.end());
  return static_cast<std::size_t>(std::unique(colors.begin(), colors.end()) - colors.begin()) <= Palette::kMaxSize;
}

}  // namespace

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error(ErrorCode::StorageError, "SHA-256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  return bytes;
}

void to_json(nlohmann::json& j, const ArchiveManifest& m) {
  j = nlohmann::json{{"object_id", m.object_id},
                     {"source_name", m.source_name},
                     {"original_width", m.original_width},
                     {"original_height", m.original_height},
                     {"original_bytes", m.original_bytes},
                     {"stored_bytes", m.stored_bytes},
                     {"dither_scale", m.dither_scale},
                     {"palette_size", m.palette_size},
                     {"scale_factor", m.scale_factor},
                     {"codec", m.codec},
                     {"created_at", m.created_at}};
}

void from_json(const nlohmann::json& j, ArchiveManifest& m) {
  j.at("object_id").get_to(m.object_id);
  j.at("source_name").get_to(m.source_name);
  j.at("original_width").get_to(m.original_width);
  j.at("original_height").get_to(m.original_height);
  j.at("original_bytes").get_to(m.original_bytes);
  j.at("stored_bytes").get_to(m.stored_bytes);
  j.at("dither_scale").get_to(m.dither_scale);
  j.at("palette_size").get_to(m.palette_size);
  j.at("scale_factor").get_to(m.scale_factor);
  j.at("codec").get_to(m.codec);
  j.at("created_at").get_to(m.created_at);
}

UpscalerBackend UpscalerBackend::parse(const std::string& spec) {
  if (spec == "native") return native();
  constexpr std::string_view prefix = "external:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) return external(spec.substr(prefix.size()));
  throw Error(ErrorCode::InvalidConfig, "backend must be 'native' or 'external:<command>', got '" + spec + "'");
}

RasterImage upscale_with(const RasterImage& img, const UpscalerBackend& backend) {
  if (backend.kind == UpscalerBackend::Kind::NativeLanczos3) return upscale_4x(img);

  TempDir dir;
  const fs::path in = fs::absolute(dir.path() / "input.png");
  const fs::path out = fs::absolute(dir.path() / "output.png");
  write_atomically(in, encode_png(img));
  const int code = run_command(backend.command_template, in, out);
  if (code != 0) throw Error(ErrorCode::BackendFailure, "upscaler exited with status " + std::to_string(code));
  RasterImage result;
  try {
    result = decode_png(read_file(out));
  } catch (const Error& e) {
    throw Error(ErrorCode::BackendFailure, std::string("upscaler output unusable: ") + e.what());
  }
  if (result.width() != img.width() * kScaleFactor || result.height() != img.height() * kScaleFactor)
    throw Error(ErrorCode::BackendFailure, "upscaler produced " + std::to_string(result.width()) + "x" +
                                               std::to_string(result.height()) + ", expected " +
                                               std::to_string(img.width() * kScaleFactor) + "x" +
                                               std::to_string(img.height() * kScaleFactor));
  return result;
}

StoredObject prepare_for_storage(const RasterImage& img, const DitherConfig& cfg, int compression_effort) {
  cfg.validate();
  if (img.width() < kScaleFactor || img.height() < kScaleFactor)
    throw Error(ErrorCode::TooSmall, "image must be at least 4x4 to archive");
  auto [dithered, palette] = quantize_for_storage(img, cfg);
  const RasterImage small = downscale_4x(dithered);

  EncodeParams params;
  params.compression_effort = compression_effort;
  StoredObject obj;
  obj.width = small.width();
  obj.height = small.height();
  if (fits_palette(small)) {
    obj.bytes = encode_png(small, median_cut(small, Palette::kMaxSize), params);
    obj.codec = "png-indexed";
  } else {
    obj.bytes = encode_png(small, params);
    obj.codec = small.has_alpha() ? "png-rgba" : "png-rgb";
  }
  return obj;
}

RasterImage reconstruct(std::span<const std::uint8_t> stored, std::size_t original_width,
                        std::size_t original_height, const UpscalerBackend& backend) {
  const RasterImage small = decode_png(stored);
  return center_crop(upscale_with(small, backend), original_width, original_height);
}

ObjectStore::ObjectStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "blobs", ec);
  if (ec || !fs::is_directory(root_ / "blobs"))
    throw Error(ErrorCode::StorageError, "cannot open store at " + root_.string() + ": " + ec.message());
}

fs::path ObjectStore::blob_path(const std::string& object_id) const { return root_ / "blobs" / (object_id + ".png"); }

std::vector<ArchiveManifest> ObjectStore::entries() const {
  std::vector<ArchiveManifest> rows;
  std::ifstream in(root_ / "manifest.jsonl");
  if (!in) return rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      rows.push_back(nlohmann::json::parse(line).get<ArchiveManifest>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::StorageError, "manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

void ObjectStore::append(const ArchiveManifest& row) {
  std::vector<std::uint8_t> content;
  const fs::path manifest = root_ / "manifest.jsonl";
  if (fs::exists(manifest)) content = read_file(manifest);
  if (!content.empty() && content.back() != '\n') content.push_back('\n');
  const std::string line = nlohmann::json(row).dump() + "\n";
  content.insert(content.end(), line.begin(), line.end());
  write_atomically(manifest, content);
}

ArchiveManifest ObjectStore::archive(const fs::path& image_file, const DitherConfig& cfg) {
  cfg.validate();
  if (!fs::is_regular_file(image_file)) throw Error(ErrorCode::NotFound, "no such file: " + image_file.string());
  const auto original = read_file(image_file);
  const RasterImage img = decode_png(original);
  const StoredObject obj = prepare_for_storage(img, cfg);

  ArchiveManifest row;
  row.object_id = sha256_hex(obj.bytes);
  row.source_name = image_file.filename().string();
  row.original_width = img.width();
  row.original_height = img.height();
  row.original_bytes = original.size();
  row.stored_bytes = obj.bytes.size();
  row.dither_scale = cfg.scale;
  row.palette_size = cfg.palette_size;
  row.codec = obj.codec;

  StoreLock lock(root_);
  for (const auto& existing : entries()) {
    if (existing.object_id == row.object_id && existing.source_name == row.source_name &&
        existing.dither_scale == row.dither_scale && existing.palette_size == row.palette_size)
      return existing;
  }
  const fs::path blob = blob_path(row.object_id);
  if (!fs::exists(blob) || fs::file_size(blob) != obj.bytes.size()) write_atomically(blob, obj.bytes);
  row.created_at = utc_now();
  append(row);
  return row;
}

ArchiveManifest ObjectStore::resolve(const std::string& id_or_name) const {
  const auto rows = entries();
  for (const auto& r : rows)
    if (r.object_id == id_or_name) return r;
  std::vector<const ArchiveManifest*> named;
  std::set<std::string> ids;
  for (const auto& r : rows) {
    if (r.source_name == id_or_name && ids.insert(r.object_id).second) named.push_back(&r);
  }
  if (named.empty()) throw Error(ErrorCode::NotFound, "no object or source named '" + id_or_name + "'");
  if (named.size() > 1) {
    std::string list;
    for (const auto* r : named) list += "\n  " + r->object_id + " (dither " + std::to_string(r->dither_scale) + ")";
    throw Error(ErrorCode::AmbiguousName, "'" + id_or_name + "' matches several objects:" + list);
  }
  return *named.front();
}

RasterImage ObjectStore::retrieve(const std::string& object_id, const UpscalerBackend& backend) const {
  const auto rows = entries();
  const auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.object_id == object_id; });
  if (it == rows.end()) throw Error(ErrorCode::NotFound, "unknown object id " + object_id);
  const auto bytes = read_file(blob_path(object_id));
  return reconstruct(bytes, it->original_width, it->original_height, backend);
}

VerifyReport ObjectStore::verify() const {
  VerifyReport report;
  for (const auto& row : entries()) {
    ++report.checked;
    const fs::path blob = blob_path(row.object_id);
    if (!fs::exists(blob)) {
      report.problems.push_back(row.object_id + ": blob missing");
      continue;
    }
    const auto bytes = read_file(blob);
    if (bytes.size() != row.stored_bytes)
      report.problems.push_back(row.object_id + ": size " + std::to_string(bytes.size()) + " != manifest " +
                                std::to_string(row.stored_bytes));
    if (sha256_hex(bytes) != row.object_id) report.problems.push_back(row.object_id + ": content hash mismatch");
    if (row.scale_factor != kScaleFactor) report.problems.push_back(row.object_id + ": unexpected scale factor");
  }
  return report;
}

void to_json(nlohmann::json& j, const EvaluationRow& r) {
  j = nlohmann::json{{"dataset", r.dataset},
                     {"dither_scale", r.config.scale},
                     {"palette_size", r.config.palette_size},
                     {"images", r.images},
                     {"quality", r.report}};
}

void from_json(const nlohmann::json& j, EvaluationRow& r) {
  j.at("dataset").get_to(r.dataset);
  j.at("dither_scale").get_to(r.config.scale);
  j.at("palette_size").get_to(r.config.palette_size);
  j.at("images").get_to(r.images);
  r.report = j.at("quality").get<QualityReport>();
}

std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::NotFound, "no such directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<EvaluationRow> evaluate_dataset(const fs::path& dir, std::span<const DitherConfig> cfgs,
                                            const UpscalerBackend& backend) {
  for (const auto& cfg : cfgs) cfg.validate();
  const auto files = list_pngs(dir);
  if (files.empty()) throw Error(ErrorCode::EmptyDataset, "no PNG files in " + dir.string());

  const std::string name = fs::absolute(dir).lexically_normal().filename().string();
  std::vector<EvaluationRow> rows;
  for (const auto& cfg : cfgs) {
    EvaluationRow row;
    row.dataset = name.empty() ? dir.string() : name;
    row.config = cfg;
    double psnr_sum = 0.0, ssim_sum = 0.0;
    for (const auto& file : files) {
      const auto original = read_file(file);
      const RasterImage img = decode_png(original);
      const StoredObject obj = prepare_for_storage(img, cfg);
      const RasterImage back = reconstruct(obj.bytes, img.width(), img.height(), backend);
      psnr_sum += psnr(img, back);
      ssim_sum += ssim(img, back);
      row.report.original_bytes += original.size();
      row.report.stored_bytes += obj.bytes.size();
      ++row.images;
    }
    row.report.psnr_db = psnr_sum / static_cast<double>(row.images);
    row.report.ssim = ssim_sum / static_cast<double>(row.images);
    row.report.compression_pct = compression_percentage(static_cast<double>(row.report.original_bytes),
                                                        static_cast<double>(row.report.stored_bytes));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace greenstore
