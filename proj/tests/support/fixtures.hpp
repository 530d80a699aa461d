#pragma once

#include "trackpoly/model.hpp"

#include <string>

#ifndef TRACKPOLY_FIXTURE_DIR
#error "TRACKPOLY_FIXTURE_DIR must be defined"
#endif

inline std::string fixture_path(const std::string& name) { return std::string(TRACKPOLY_FIXTURE_DIR) + "/" + name; }

inline trackpoly::TrainTrackMap load_fixture(const std::string& name) {
  return trackpoly::load_spec(fixture_path(name));
}

inline const char* const kAllFixtures[] = {"k8_9.tt",     "penner.tt",         "odd_rose.tt",
                                           "genus2_odd.tt", "odd_evanescent.tt", "pentagon.tt"};
inline const char* const kOddFixtures[] = {"odd_rose.tt", "genus2_odd.tt", "odd_evanescent.tt", "pentagon.tt"};
inline const char* const kNonOrientableFixtures[] = {"penner.tt",         "odd_rose.tt", "genus2_odd.tt",
                                                     "odd_evanescent.tt", "pentagon.tt"};
