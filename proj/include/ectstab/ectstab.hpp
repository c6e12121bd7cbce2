#pragma once

#include "ectstab/bounds.hpp"
#include "ectstab/complex.hpp"
#include "ectstab/curve.hpp"
#include "ectstab/ect.hpp"
#include "ectstab/error.hpp"
#include "ectstab/gp.hpp"
#include "ectstab/io.hpp"
#include "ectstab/kernel.hpp"
#include "ectstab/parallel.hpp"
#include "ectstab/pipeline.hpp"
#include "ectstab/step_function.hpp"
