#include <charconv>
#include <fstream>

#include "../util.hpp"
#include "gumorph/cli.hpp"

namespace gumorph::cli {

void Config::validate() const {
  const auto& h = hyper;
  if (h.embed_dim == 0 || h.hidden_dim == 0 || h.batch == 0 || h.epochs == 0) {
    throw ConfigError("dimensions, batch and epochs must be positive");
  }
  if (!(h.lr > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(h.threshold > 0.0 && h.threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim_cr(line);
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string_view::npos || text[first] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    auto strip = [](std::string_view s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
    };
    values[strip(text.substr(0, eq))] = strip(text.substr(eq + 1));
  }
  return values;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  }
}

void apply_key_values(Config& config, const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (key == "task") {
      config.task = value;
    } else if (key == "train") {
      config.train = value;
    } else if (key == "test") {
      config.test = value;
    } else if (key == "model") {
      config.model = value;
    } else if (key == "rules") {
      config.rules = value;
    } else if (key == "registry") {
      config.registry = value;
    } else if (key == "input") {
      config.input = value;
    } else if (key == "out") {
      config.out = value;
    } else if (key == "pos") {
      config.pos = value;
    } else if (key == "seed") {
      config.hyper.seed = parse_size(key, value);
    } else if (key == "epochs") {
      config.hyper.epochs = parse_size(key, value);
    } else if (key == "batch") {
      config.hyper.batch = parse_size(key, value);
    } else if (key == "embed-dim") {
      config.hyper.embed_dim = parse_size(key, value);
    } else if (key == "hidden-dim") {
      config.hyper.hidden_dim = parse_size(key, value);
    } else if (key == "lr") {
      config.hyper.lr = parse_double(key, value);
    } else if (key == "threshold") {
      config.hyper.threshold = parse_double(key, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

}  // namespace gumorph::cli
