#pragma once

#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <string>

#include "lauricella/lauricella.hpp"
#include "polygen.hpp"

namespace lauricella::testing {

template <typename F>
void expect_error(Errc code, F&& body) {
  try {
    body();
    ADD_FAILURE() << "expected " << errc_name(code) << ", nothing thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

inline RationalFunction rf(const std::string& text, const VarTablePtr& vt) { return parse_expr(text, vt); }

}  // namespace lauricella::testing
