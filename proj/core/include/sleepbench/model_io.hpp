#pragma once

#include <string>
#include <string_view>

#include "sleepbench/classic.hpp"
#include "sleepbench/convnet.hpp"

namespace sleepbench {

/// Versioned JSON text format for trained models: a format/version envelope,
/// a kind tag, and the parameter arrays. Round-trips exactly (doubles are
/// serialized shortest-round-trip).
std::string save_model(const ClassicModel& model);
std::string save_model(const CnnModel& model);

ClassicModel load_classic_model(std::string_view text);
CnnModel load_cnn_model(std::string_view text);

}  // namespace sleepbench
