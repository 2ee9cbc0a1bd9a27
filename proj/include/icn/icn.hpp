#pragma once

#include "icn/bits.hpp"
#include "icn/dataset.hpp"
#include "icn/error.hpp"
#include "icn/evaluation.hpp"
#include "icn/hebbian.hpp"
#include "icn/network.hpp"
#include "icn/node.hpp"
#include "icn/random.hpp"
#include "icn/topology.hpp"
#include "icn/vmm.hpp"
