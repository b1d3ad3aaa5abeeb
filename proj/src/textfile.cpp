#include "edgeharden/textfile.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "edgeharden/errors.hpp"

namespace edgeharden::textfile {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

Writer::Writer(std::string_view magic, int version) {
  out_ += "# ";
  out_ += magic;
  out_ += ' ';
  out_ += std::to_string(version);
  out_ += '\n';
}

void Writer::scalar(std::string_view key, double v) {
  out_ += key;
  out_ += ' ';
  out_ += format_number(v);
  out_ += '\n';
}

void Writer::scalar(std::string_view key, std::int64_t v) {
  out_ += key;
  out_ += ' ';
  out_ += std::to_string(v);
  out_ += '\n';
}

void Writer::scalar(std::string_view key, std::string_view v) {
  out_ += key;
  out_ += ' ';
  out_ += v;
  out_ += '\n';
}

void Writer::dims(const std::vector<std::size_t>& d) {
  out_ += " [";
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k) out_ += ' ';
    out_ += std::to_string(d[k]);
  }
  out_ += ']';
}

void Writer::array(std::string_view key, const std::vector<std::size_t>& d,
                   const std::vector<double>& values) {
  out_ += key;
  dims(d);
  for (double v : values) {
    out_ += ' ';
    out_ += format_number(v);
  }
  out_ += '\n';
}

void Writer::array(std::string_view key, const std::vector<std::size_t>& d,
                   const std::vector<std::int64_t>& values) {
  out_ += key;
  dims(d);
  for (auto v : values) {
    out_ += ' ';
    out_ += std::to_string(v);
  }
  out_ += '\n';
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line, const std::string& key) {
  if (tok == "inf") return INFINITY;
  if (tok == "-inf") return -INFINITY;
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a number, got '" + tok + "'", line, key);
  return v;
}

std::int64_t parse_int(const std::string& tok, int line, const std::string& key) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected an integer, got '" + tok + "'", line, key);
  return v;
}

}  // namespace

Reader::Reader(const std::string& text, std::string_view magic) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 3 || toks[0] != "#" || toks[1] != magic)
        throw ParseError("missing '# " + std::string(magic) + " <version>' header", lineno, "");
      version_ = static_cast<int>(parse_int(toks[2], lineno, "version"));
      header = true;
      continue;
    }
    if (toks[0].front() == '#') continue;
    Record rec;
    rec.line = lineno;
    const std::string key = toks[0];
    std::size_t pos = 1;
    if (pos < toks.size() && toks[pos].front() == '[') {
      // Dimension header, possibly split over several tokens: "[2" "3]".
      std::string dimtext;
      while (pos < toks.size()) {
        dimtext += toks[pos] + ' ';
        if (toks[pos].back() == ']') break;
        ++pos;
      }
      if (pos == toks.size()) throw ParseError("unterminated dimension header", lineno, key);
      ++pos;
      for (char& c : dimtext)
        if (c == '[' || c == ']') c = ' ';
      for (const auto& d : split(dimtext)) {
        auto v = parse_int(d, lineno, key);
        if (v < 0) throw ParseError("negative dimension", lineno, key);
        rec.dims.push_back(static_cast<std::size_t>(v));
      }
    }
    rec.tokens.assign(toks.begin() + static_cast<std::ptrdiff_t>(pos), toks.end());
    if (rec.dims.empty() && rec.tokens.size() != 1)
      throw ParseError("expected exactly one value", lineno, key);
    if (!rec.dims.empty()) {
      std::size_t n = 1;
      for (auto d : rec.dims) n *= d;
      if (rec.tokens.size() != n)
        throw ParseError("expected " + std::to_string(n) + " values, found " +
                             std::to_string(rec.tokens.size()),
                         lineno, key);
    }
    if (records_.count(key)) throw ParseError("duplicate field", lineno, key);
    records_.emplace(key, std::move(rec));
  }
  if (!header) throw ParseError("empty file", lineno, "");
  last_line_ = lineno;
}

const Record& Reader::get(const std::string& key) const {
  auto it = records_.find(key);
  if (it == records_.end()) throw ParseError("missing field", last_line_ + 1, key);
  used_[key] = true;
  return it->second;
}

double Reader::scalar(const std::string& key) const {
  const auto& rec = get(key);
  if (!rec.dims.empty()) throw ParseError("expected a scalar", rec.line, key);
  return parse_double(rec.tokens[0], rec.line, key);
}

std::int64_t Reader::integer(const std::string& key) const {
  const auto& rec = get(key);
  if (!rec.dims.empty()) throw ParseError("expected a scalar", rec.line, key);
  return parse_int(rec.tokens[0], rec.line, key);
}

std::string Reader::word(const std::string& key) const {
  const auto& rec = get(key);
  if (!rec.dims.empty()) throw ParseError("expected a scalar", rec.line, key);
  return rec.tokens[0];
}

std::vector<double> Reader::array(const std::string& key,
                                  const std::vector<std::size_t>& dims) const {
  const auto& rec = get(key);
  if (rec.dims != dims) throw ParseError("dimension mismatch", rec.line, key);
  std::vector<double> out;
  out.reserve(rec.tokens.size());
  for (const auto& t : rec.tokens) out.push_back(parse_double(t, rec.line, key));
  return out;
}

std::vector<std::int64_t> Reader::int_array(const std::string& key,
                                            const std::vector<std::size_t>& dims) const {
  const auto& rec = get(key);
  if (rec.dims != dims) throw ParseError("dimension mismatch", rec.line, key);
  std::vector<std::int64_t> out;
  out.reserve(rec.tokens.size());
  for (const auto& t : rec.tokens) out.push_back(parse_int(t, rec.line, key));
  return out;
}

std::vector<std::string> Reader::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, rec] : records_)
    if (!used_.count(key)) out.push_back(key);
  return out;
}

}  // namespace edgeharden::textfile
