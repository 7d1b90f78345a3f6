#pragma once

#include <stdexcept>
#include <string>

#include "dimcheck/measure.hpp"

namespace testing {

// The default registry with the pound scale off by one in its last digit.
inline dimcheck::UnitRegistry mutated_pound_registry() {
  std::string text(dimcheck::default_registry_text());
  const std::string original = "scale 0.45359237";
  const auto at = text.find(original);
  if (at == std::string::npos) throw std::logic_error("pound definition not found");
  text.replace(at, original.size(), "scale 0.45359238");
  dimcheck::UnitRegistry reg = dimcheck::UnitRegistry::standard();
  dimcheck::load_registry_text(reg, text, "mutated");
  return reg;
}

}  // namespace testing
