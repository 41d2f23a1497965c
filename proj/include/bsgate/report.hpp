#pragma once

// Key:value run reports. Everything before the trailer is a pure function of
// the inputs and parameters; the wall-clock duration goes on the last line.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "bsgate/complex.hpp"

#ifndef BSGATE_VERSION
#define BSGATE_VERSION "0.0.0"
#endif

namespace bsgate {

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("InvariantViolation", "sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

struct RunReport {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, std::string>> body;
  std::vector<std::string> blocks;  // verbatim text appended after the body
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void input(const std::string& path, const std::string& content) { inputs.emplace_back(path, sha256_hex(content)); }
  void param(std::string k, std::string v) { parameters.emplace_back(std::move(k), std::move(v)); }
  void add(std::string k, std::string v) { body.emplace_back(std::move(k), std::move(v)); }

  std::string verdict_text() const {
    std::string s = "tool: bsgate " BSGATE_VERSION "\nsubcommand: " + subcommand + "\n";
    for (const auto& [p, d] : inputs) s += "input: " + p + " sha256:" + d + "\n";
    for (const auto& [k, v] : parameters) s += "param." + k + ": " + v + "\n";
    for (const auto& [k, v] : body) s += k + ": " + v + "\n";
    for (const auto& b : blocks) s += b;
    return s;
  }

  std::string render() const {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return verdict_text() + "--\nduration_ms: " + buf + "\n";
  }
};

}  // namespace bsgate
