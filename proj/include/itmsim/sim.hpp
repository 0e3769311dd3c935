#pragma once

#include "itmsim/engine.hpp"
#include "itmsim/events.hpp"

namespace itmsim {

using Engine = EngineT<EventPayload>;
using Event = Engine::Event;

}  // namespace itmsim
