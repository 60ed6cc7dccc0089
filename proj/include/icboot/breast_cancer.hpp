#pragma once

// Breast cosmesis data: months until breast retraction for 94 early breast
// cancer patients treated 1976-1980, split by treatment. Each patient
// contributes (l, r]; r = inf when retraction had not appeared by the last
// visit. Transcribed from Finkelstein and Wolfe (1985), Table 4; the same
// records ship with the R packages `interval` (bcos) and `Icens` (cosmesis).
// Bump kBreastCancerVersion whenever a record is corrected.

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "icboot/data.hpp"
#include "icboot/io.hpp"

namespace icboot {

inline constexpr std::string_view kBreastCancerVersion = "bcos-1";

struct BreastCancerData {
    std::vector<CensoringInterval> radiotherapy;  // T = 0, 46 patients
    std::vector<CensoringInterval> radio_chemo;   // T = 1, 48 patients
};

namespace detail {

inline constexpr double kOpen = kInfinity;

inline constexpr std::array<std::pair<double, double>, 46> kRadiotherapy{{
    {0, 7},     {0, 8},     {0, 5},     {4, 11},    {5, 12},    {5, 11},    {6, 10},    {7, 16},
    {7, 14},    {11, 15},   {11, 18},   {15, kOpen}, {17, kOpen}, {17, 25},  {17, 25},   {18, kOpen},
    {19, 35},   {18, 26},   {22, kOpen}, {24, kOpen}, {24, kOpen}, {25, 37}, {26, 40},   {27, 34},
    {32, kOpen}, {33, kOpen}, {34, kOpen}, {36, 44}, {36, 48},   {36, kOpen}, {36, kOpen}, {37, 44},
    {37, kOpen}, {37, kOpen}, {37, kOpen}, {38, kOpen}, {40, kOpen}, {45, kOpen}, {46, kOpen}, {46, kOpen},
    {46, kOpen}, {46, kOpen}, {46, kOpen}, {46, kOpen}, {46, kOpen}, {46, kOpen},
}};

inline constexpr std::array<std::pair<double, double>, 48> kRadioChemo{{
    {0, 22},    {0, 5},     {4, 9},     {4, 8},     {5, 8},     {8, 12},    {8, 21},    {10, 35},
    {10, 17},   {11, 13},   {11, kOpen}, {11, 17},  {11, kOpen}, {11, 20},  {12, 20},   {13, kOpen},
    {13, 39},   {13, kOpen}, {13, kOpen}, {14, 17}, {14, 19},   {15, 22},   {16, 24},   {16, 20},
    {16, 24},   {16, 60},   {17, 27},   {17, 23},   {17, 26},   {18, 25},   {18, 24},   {19, 32},
    {21, kOpen}, {22, 32},  {23, kOpen}, {24, 31},  {24, 30},   {30, 34},   {30, 36},   {31, kOpen},
    {32, kOpen}, {32, 40},  {34, kOpen}, {34, kOpen}, {35, kOpen}, {35, 39}, {44, 48},   {48, kOpen},
}};

template <std::size_t N>
std::vector<CensoringInterval> to_intervals(const std::array<std::pair<double, double>, N>& rows) {
    std::vector<CensoringInterval> out;
    out.reserve(N);
    for (const auto& [l, r] : rows) out.emplace_back(l, r);
    return out;
}

}  // namespace detail

inline BreastCancerData load_breast_cancer() {
    return {detail::to_intervals(detail::kRadiotherapy), detail::to_intervals(detail::kRadioChemo)};
}

// FNV-1a of both groups in canonical intervals CSV form, T=0 first.
inline std::string breast_cancer_checksum() {
    auto data = load_breast_cancer();
    Dataset a{DatasetFormat::intervals, {}, data.radiotherapy, {}, {}};
    Dataset b{DatasetFormat::intervals, {}, data.radio_chemo, {}, {}};
    return hex64(fnv1a(serialize_dataset(a) + serialize_dataset(b)));
}

}  // namespace icboot
