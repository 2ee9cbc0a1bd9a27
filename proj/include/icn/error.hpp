#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace icn {

enum class Errc {
  invalid_parameter,
  invalid_symbol,
  invalid_input,
  invalid_topology,
  configuration,
  parse,
  dataset_not_found,
  io,
};

/// Machine-parsable tag printed by the CLI in front of the message.
constexpr std::string_view tag(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_symbol: return "invalid-symbol";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_topology: return "invalid-topology";
    case Errc::configuration: return "configuration";
    case Errc::parse: return "parse-error";
    case Errc::dataset_not_found: return "dataset-not-found";
    case Errc::io: return "io-error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Parse failures carry the byte offset (binary formats) or the 1-based line
// number (text formats) where the problem was detected.
class ParseError : public Error {
 public:
  enum class Where { byte_offset, line };

  ParseError(Where where, std::size_t position, const std::string& what)
      : Error(Errc::parse, describe(where, position, what)), where_(where), position_(position) {}

  Where where() const noexcept { return where_; }
  std::size_t position() const noexcept { return position_; }

 private:
  static std::string describe(Where where, std::size_t position, const std::string& what) {
    return (where == Where::byte_offset ? "at byte " : "at line ") + std::to_string(position) + ": " +
           what;
  }

  Where where_;
  std::size_t position_;
};

}  // namespace icn
