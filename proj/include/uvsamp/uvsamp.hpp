#pragma once

#include "uvsamp/continuous.hpp"
#include "uvsamp/errors.hpp"
#include "uvsamp/format.hpp"
#include "uvsamp/generators.hpp"
#include "uvsamp/io.hpp"
#include "uvsamp/linalg.hpp"
#include "uvsamp/periodic.hpp"
#include "uvsamp/pipeline.hpp"
#include "uvsamp/scenario.hpp"
#include "uvsamp/tensor.hpp"
#include "uvsamp/types.hpp"
