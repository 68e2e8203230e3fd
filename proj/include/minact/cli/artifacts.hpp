#pragma once

#include <string>
#include <utility>
#include <vector>

namespace minact::cli {

std::string sha256_hex(const std::string& data);

/// Shortest decimal that round-trips ("%.17g").
std::string fmt(double v);

/// Builds CSV text with a fixed header; numbers via fmt().
class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header);
  Csv& cell(double v);
  Csv& cell(long long v);
  Csv& cell(int v) { return cell(static_cast<long long>(v)); }
  Csv& cell(const std::string& v);
  void end_row();
  const std::string& str() const { return text_; }

 private:
  std::string text_;
  bool fresh_ = true;
};

/// Collects artifacts in memory and commits them together. Each file is
/// written to a temporary name in the output directory and renamed into place,
/// so readers never see a partial file and a failed run leaves no artifacts.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::string out_dir);
  void add(const std::string& name, std::string content);
  const std::vector<std::string>& names() const { return names_; }
  void commit() const;

  /// Atomic single-file write, used for failure snapshots.
  static void write_atomic(const std::string& path, const std::string& content);

 private:
  std::string dir_;
  std::vector<std::string> names_;
  std::vector<std::string> contents_;
};

}  // namespace minact::cli
