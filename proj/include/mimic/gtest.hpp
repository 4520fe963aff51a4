#pragma once

#include <gtest/gtest.h>

#include "mimic/mock.hpp"

/// Non-fatal expectation on a mimic::VerifyResult, reporting its message.
#define MIMIC_EXPECT(...)                                         \
  do {                                                            \
    const ::mimic::VerifyResult mimic_result_ = (__VA_ARGS__);    \
    EXPECT_TRUE(mimic_result_.ok) << mimic_result_.message;       \
  } while (false)
