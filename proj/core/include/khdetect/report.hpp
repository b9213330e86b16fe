#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "khdetect/corpus.hpp"
#include "khdetect/detect.hpp"
#include "khdetect/gridfloer.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/laurent.hpp"

namespace khdetect::report {

struct KhReport {
  std::string input;
  std::string field;  // f2 or q
  bool reduced = false;
  std::optional<int> basepoint;
  khovanov::BigradedRanks ranks;
};
std::string kh_json(const KhReport& r);
std::string kh_text(const KhReport& r);

struct TorresResult {
  std::string knot;
  int l = 1;
  bool pass = false;
  int knot_component = 0;
};

struct AlexReport {
  std::string input;
  std::string grid;
  int components = 1;
  laurent::LaurentPoly chi{1};    // doubled exponents
  laurent::LaurentPoly delta{1};  // ordinary exponents, up to units
  std::optional<TorresResult> torres;
};
std::string alex_json(const AlexReport& r);
std::string alex_text(const AlexReport& r);

// Link Floer summary: F2 dims, Euler characteristic lower bounds and which
// of them certify the Q dimension.
struct HflReport {
  std::string input;
  std::string grid;
  gridfloer::GradedDims hat;
};
std::string hfl_json(const HflReport& r);
std::string hfl_text(const HflReport& r);

std::string certificate_json(const detect::Certificate& c);
std::string certificate_text(const detect::Certificate& c);
// SchemaViolation on malformed input.
detect::Certificate certificate_from_json(std::string_view text);

std::string verify_json(const corpus::VerifyReport& r);
std::string verify_text(const corpus::VerifyReport& r);

}  // namespace khdetect::report
