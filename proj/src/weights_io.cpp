#include "pixmap/weights_io.hpp"

#include <charconv>
#include <sstream>

#include "pixmap/error.hpp"

namespace pixmap {

namespace {

Error malformed(const std::string& why) {
  return Error(ErrorCode::kMalformedHeader, "weights file: " + why);
}

template <typename T>
T parse_number(std::string_view token, const char* what) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw malformed(std::string("bad ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

std::string expect_line(std::istringstream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw malformed(std::string("missing ") + what);
  return line;
}

std::string_view value_after(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() + 1 || line.substr(0, key.size()) != key ||
      line[key.size()] != ' ') {
    throw malformed("expected '" + std::string(key) + "' line");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

std::string encode_weights(const ModelFile& model) {
  std::string out = "PIXMAP-W1\n";
  out += "reducer " + to_string(model.reducer) + "\n";
  out += "crop " + std::to_string(model.crop) + "\n";
  out += "seed " + std::to_string(model.seed) + "\n";
  char buf[64];
  for (const Tensor* t : model.params.tensors()) {
    out += "tensor " + t->name + " " + std::to_string(t->shape.size());
    for (int d : t->shape) out += " " + std::to_string(d);
    out += "\n";
    for (std::size_t i = 0; i < t->values.size(); ++i) {
      if (i) out += ' ';
      const auto res = std::to_chars(buf, buf + sizeof buf, t->values[i]);
      out.append(buf, res.ptr);
    }
    out += "\n";
  }
  return out;
}

ModelFile decode_weights(std::string_view text) {
  std::istringstream in{std::string(text)};
  if (expect_line(in, "magic") != "PIXMAP-W1") {
    throw Error(ErrorCode::kUnsupportedFormat, "not a PIXMAP-W1 weights file");
  }
  ModelFile model;
  model.reducer = parse_reducer(value_after(expect_line(in, "reducer"), "reducer"));
  model.crop = parse_number<int>(value_after(expect_line(in, "crop"), "crop"), "crop");
  model.seed = parse_number<std::uint64_t>(
      value_after(expect_line(in, "seed"), "seed"), "seed");

  for (Tensor* t : model.params.tensors()) {
    std::istringstream header(expect_line(in, "tensor header"));
    std::string tag, name;
    std::size_t rank = 0;
    header >> tag >> name >> rank;
    if (tag != "tensor" || name != t->name || rank != t->shape.size()) {
      throw malformed("expected tensor " + t->name);
    }
    for (int expected : t->shape) {
      int dim = -1;
      header >> dim;
      if (dim != expected) throw malformed("shape mismatch for " + t->name);
    }
    const std::string values = expect_line(in, "tensor values");
    std::string_view rest = values;
    for (auto& v : t->values) {
      const auto space = rest.find(' ');
      v = parse_number<double>(rest.substr(0, space), "value");
      rest = space == std::string_view::npos ? std::string_view{}
                                             : rest.substr(space + 1);
    }
    if (!rest.empty()) throw malformed("too many values for " + t->name);
  }
  return model;
}

}  // namespace pixmap
