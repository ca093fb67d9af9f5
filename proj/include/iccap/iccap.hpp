#pragma once

#include "iccap/core/errors.hpp"
#include "iccap/core/parallel.hpp"
#include "iccap/core/random.hpp"
#include "iccap/core/report.hpp"
#include "iccap/decode_order.hpp"
#include "iccap/discrete/channel.hpp"
#include "iccap/discrete/conditions.hpp"
#include "iccap/discrete/degraded.hpp"
#include "iccap/discrete/expression.hpp"
#include "iccap/discrete/many_to_one.hpp"
#include "iccap/discrete/search.hpp"
#include "iccap/gaussian/bounds.hpp"
#include "iccap/gaussian/channel.hpp"
#include "iccap/gaussian/regimes.hpp"
#include "iccap/info/assemble.hpp"
#include "iccap/info/csiszar_korner.hpp"
#include "iccap/info/joint_dist.hpp"
#include "iccap/info/simplex.hpp"
#include "iccap/io/serialize.hpp"
#include "iccap/oracle/brute_force.hpp"
#include "iccap/oracle/conditioning.hpp"
#include "iccap/oracle/gaussian_equivalence.hpp"
#include "iccap/oracle/nletter.hpp"
