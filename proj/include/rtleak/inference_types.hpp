#pragma once

#include "rtleak/pst.hpp"
#include "rtleak/taskmodel.hpp"

namespace rtleak {

struct PredictionRecord {
    long observer_job_index = 0;
    Symbol predicted_response = 0;
    Mode predicted_mode = Mode::Typical;
    Mode actual_window_label = Mode::Typical;
    bool correct = false;
};

}  // namespace rtleak
