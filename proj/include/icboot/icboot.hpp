#pragma once

#include "icboot/error.hpp"
#include "icboot/gcm.hpp"
#include "icboot/data.hpp"
#include "icboot/distribution.hpp"
#include "icboot/npmle.hpp"
#include "icboot/one_step.hpp"
#include "icboot/random.hpp"
#include "icboot/parallel.hpp"
#include "icboot/stats.hpp"
#include "icboot/bootstrap.hpp"
#include "icboot/limit.hpp"
#include "icboot/sim.hpp"
#include "icboot/io.hpp"
#include "icboot/breast_cancer.hpp"
