#pragma once

#include "csitlab/achievability.hpp"
#include "csitlab/bound.hpp"
#include "csitlab/channel_model.hpp"
#include "csitlab/config.hpp"
#include "csitlab/constants.hpp"
#include "csitlab/core.hpp"
#include "csitlab/entropy.hpp"
#include "csitlab/inequality_lab.hpp"
#include "csitlab/laws.hpp"
#include "csitlab/maxent.hpp"
#include "csitlab/quadrature.hpp"
