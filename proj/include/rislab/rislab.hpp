#ifndef RISLAB_RISLAB_HPP
#define RISLAB_RISLAB_HPP

#include "types.hpp"
#include "random.hpp"
#include "phase_noise.hpp"
#include "linalg.hpp"
#include "channel.hpp"
#include "estimation.hpp"
#include "precoding.hpp"
#include "rates.hpp"
#include "power_allocation.hpp"
#include "parallel.hpp"
#include "montecarlo.hpp"
#include "experiments.hpp"

#endif  // RISLAB_RISLAB_HPP
