// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The gvm-spectral Authors

#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "gvm/error.hpp"

namespace gvm::cli {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  return in;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& field, const std::string& source, std::size_t line) {
  const std::string t = trim(field);
  if (t.empty()) parse_error(source, line, "empty field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    parse_error(source, line, "not a number: '" + t + "'");
  }
  if (used != t.size()) parse_error(source, line, "not a number: '" + t + "'");
  if (!std::isfinite(v)) parse_error(source, line, "non-finite value: '" + t + "'");
  return v;
}

}  // namespace

GvMParams parse_params(std::istream& in, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::parse, source + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::parse, source + ": expected a JSON object");
  for (const char* key : {"k", "sigma2", "mus", "kappas"})
    if (!j.contains(key)) throw Error(ErrorKind::parse, source + ": missing field '" + key + "'");

  GvMParams p;
  try {
    const int k = j.at("k").get<int>();
    p.sigma2 = j.at("sigma2").get<double>();
    p.mus = j.at("mus").get<std::vector<double>>();
    p.kappas = j.at("kappas").get<std::vector<double>>();
    if (k < 1) throw Error(ErrorKind::invalid_argument, source + ": k must be >= 1");
    if (p.mus.size() != static_cast<std::size_t>(k) || p.kappas.size() != static_cast<std::size_t>(k))
      throw Error(ErrorKind::invalid_argument, source + ": mus and kappas must both have k = " +
                                                   std::to_string(k) + " entries");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, source + ": " + e.what());
  }
  p.validate();
  return p;
}

GvMParams read_params(const std::string& path) {
  auto in = open_input(path);
  return parse_params(in, path);
}

ComplexSeries parse_series(std::istream& in, const std::string& source) {
  ComplexSeries x;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (number == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line.empty()) continue;
    if (!header) {
      std::string compact;
      for (char c : line)
        if (c != ' ' && c != '\t') compact.push_back(c);
      if (compact != "re,im") parse_error(source, number, "expected header 're,im'");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      parse_error(source, number, "expected two comma-separated fields");
    x.values.emplace_back(parse_real(line.substr(0, comma), source, number),
                          parse_real(line.substr(comma + 1), source, number));
  }
  if (!header) parse_error(source, number == 0 ? 1 : number, "missing header 're,im'");
  return x;
}

ComplexSeries read_series(const std::string& path) {
  auto in = open_input(path);
  return parse_series(in, path);
}

void write_series(std::ostream& out, const ComplexSeries& x) {
  out << "re,im\n";
  for (const auto& v : x.values) out << format_real(v.real()) << ',' << format_real(v.imag()) << '\n';
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace gvm::cli
