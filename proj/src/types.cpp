#include "abctok/types.hpp"

#include <stdexcept>

namespace abctok {

std::string_view to_string(PatchMethod method) {
  switch (method) {
    case PatchMethod::Byte:
      return "byte";
    case PatchMethod::Bar:
      return "bar";
    case PatchMethod::BarStream:
      return "bar-stream";
    case PatchMethod::LineStream:
      return "line-stream";
  }
  return "?";
}

PatchMethod patch_method_from_string(std::string_view name) {
  if (name == "byte") return PatchMethod::Byte;
  if (name == "bar") return PatchMethod::Bar;
  if (name == "bar-stream") return PatchMethod::BarStream;
  if (name == "line-stream") return PatchMethod::LineStream;
  throw std::invalid_argument("unknown patch method: " + std::string(name));
}

PatchConfig PatchConfig::defaults(PatchMethod method) {
  PatchConfig cfg;
  cfg.method = method;
  cfg.patch_size = method == PatchMethod::Bar ? kDefaultBarPatchSize
                                              : kDefaultStreamPatchSize;
  cfg.patch_length = kDefaultPatchLength;
  return cfg;
}

std::string AbcTune::serialize() const {
  std::string out;
  out.reserve(source_text.size());
  for (const Segment& line : header_lines) out += line.text(source_text);
  for (const Segment& line : body_lines) out += line.text(source_text);
  return out;
}

std::string_view AbcTune::header_value(char field_letter) const {
  for (const Segment& line : header_lines) {
    std::string_view text = line.text(source_text);
    if (text.size() >= 2 && text[0] == field_letter && text[1] == ':') {
      text.remove_prefix(2);
      if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
      // trim surrounding spaces
      while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
      while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
      return text;
    }
  }
  return {};
}

std::string normalize(std::string_view text) {
  // UTF-8 BOM
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;  // CRLF
      out += '\n';  // bare CR
      continue;
    }
    out += text[i];
  }
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out;
}

}  // namespace abctok
