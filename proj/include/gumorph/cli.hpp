#pragma once

// Command-line front end. Commands are plain functions over streams so they
// can be driven from tests without spawning processes.
//
// Exit codes: 0 success, 1 I/O, 2 configuration, 3 data or alignment.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "gumorph/error.hpp"
#include "gumorph/nn.hpp"

namespace gumorph::cli {

enum ExitCode : int { kOk = 0, kIoFailure = 1, kConfigFailure = 2, kDataFailure = 3 };

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Config {
  std::string task;
  std::string train;
  std::string test;
  std::string model;
  std::string rules;
  std::string registry;
  std::string input;
  std::string out;
  std::string pos;
  nn::Hyperparams hyper;

  /// Throws ConfigError for non-positive sizes or a threshold outside (0, 1).
  void validate() const;
};

/// Flat "key=value" file; blank lines and '#' comments are skipped.
/// Throws IoError or ConfigError.
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Keys are the long flag names without dashes, e.g. "embed-dim=16".
/// Throws ConfigError for unknown keys or unparsable values.
void apply_key_values(Config& config, const std::map<std::string, std::string>& values);

std::size_t parse_size(const std::string& key, const std::string& value);
double parse_double(const std::string& key, const std::string& value);

/// Gradient check on a seeded toy model (a handful of short words).
nn::GradCheckResult toy_gradcheck(nn::Head head, std::uint64_t seed, std::size_t embed_dim, std::size_t hidden_dim,
                                  bool corrupt = false);

inline constexpr double kGradCheckTolerance = 1e-4;

/// args[0] is the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace gumorph::cli
