#include "minact/cli/artifacts.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace minact::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Csv::Csv(const std::vector<std::string>& header) {
  for (const auto& h : header) cell(h);
  end_row();
}

Csv& Csv::cell(const std::string& v) {
  if (!fresh_) text_ += ',';
  text_ += v;
  fresh_ = false;
  return *this;
}

Csv& Csv::cell(double v) { return cell(fmt(v)); }

Csv& Csv::cell(long long v) { return cell(std::to_string(v)); }

void Csv::end_row() {
  text_ += '\n';
  fresh_ = true;
}

ArtifactSet::ArtifactSet(std::string out_dir) : dir_(std::move(out_dir)) {}

void ArtifactSet::add(const std::string& name, std::string content) {
  names_.push_back(name);
  contents_.push_back(std::move(content));
}

void ArtifactSet::write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void ArtifactSet::commit() const {
  std::filesystem::create_directories(dir_);
  for (std::size_t i = 0; i < names_.size(); ++i)
    write_atomic((std::filesystem::path(dir_) / names_[i]).string(), contents_[i]);
}

}  // namespace minact::cli
