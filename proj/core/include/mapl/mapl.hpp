#pragma once

#include "mapl/compression.hpp"
#include "mapl/core.hpp"
#include "mapl/dimensions.hpp"
#include "mapl/harness.hpp"
#include "mapl/io.hpp"
#include "mapl/listbound.hpp"
#include "mapl/listlearn.hpp"
#include "mapl/oig.hpp"
#include "mapl/pipeline.hpp"
