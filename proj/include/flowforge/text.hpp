// Copyright 2026 The FlowForge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flowforge {

std::string trim(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
std::string replace_all(std::string text, const std::string& from, const std::string& to);
bool contains(const std::string& haystack, const std::string& needle);

// Stable 64-bit FNV-1a, used for config hashing and per-instance seed fanout.
std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 14695981039346656037ULL);
std::string fnv1a64_hex(const std::string& data);

}  // namespace flowforge
