#pragma once

// JSON-lines and CSV serialisation of the result types.

#include "momentlab/identities.hpp"
#include "momentlab/moments.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace momentlab {

inline constexpr const char* kVersion = "0.3.0";

nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const BilinearBoundReport& r);
nlohmann::json to_json(const MomentReport& r);
nlohmann::json to_json(const OffDiagonal& r);
nlohmann::json to_json(const AmplifierExpansion& e);

/// k, f_index, lambda_l, L_gl2, L_rs, weight (one row per form).
void write_csv(std::ostream& os, const MomentReport& r);

/// One compact JSON object per line; doubles printed round-trip exact.
class JsonLines {
 public:
  explicit JsonLines(std::ostream& os) : os_(&os) {}
  void write(const nlohmann::json& j);

 private:
  std::ostream* os_;
};

}  // namespace momentlab
