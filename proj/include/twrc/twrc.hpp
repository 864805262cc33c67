#ifndef TWRC_TWRC_HPP
#define TWRC_TWRC_HPP

// Rate regions and sum-rate comparisons for the AWGN two-way relay channel:
// cut-set outer bound plus four downlink-optimal schemes (complete-decode-
// forward and three functional-decode-forward variants), with optimizers,
// brute-force oracles and experiment runners layered on top.

#include "twrc/channel.hpp"
#include "twrc/region.hpp"
#include "twrc/schemes.hpp"
#include "twrc/optimizer.hpp"
#include "twrc/oracle.hpp"
#include "twrc/experiments.hpp"

#endif  // TWRC_TWRC_HPP
