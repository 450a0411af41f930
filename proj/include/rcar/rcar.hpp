#ifndef RCAR_RCAR_HPP
#define RCAR_RCAR_HPP

#include "rcar/errors.hpp"
#include "rcar/harness.hpp"
#include "rcar/inference.hpp"
#include "rcar/innovation.hpp"
#include "rcar/io.hpp"
#include "rcar/json_io.hpp"
#include "rcar/lepage.hpp"
#include "rcar/parallel.hpp"
#include "rcar/plotdata.hpp"
#include "rcar/process_sim.hpp"
#include "rcar/random.hpp"
#include "rcar/stable.hpp"

#endif // RCAR_RCAR_HPP
