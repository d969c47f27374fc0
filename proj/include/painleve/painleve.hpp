#pragma once

#include "painleve/equations.hpp"
#include "painleve/errors.hpp"
#include "painleve/integrator.hpp"
#include "painleve/io.hpp"
#include "painleve/oracles.hpp"
#include "painleve/sweep.hpp"
#include "painleve/verify.hpp"
#include "painleve/zeros.hpp"
