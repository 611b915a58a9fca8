#pragma once

#include "cmcp/domain.hpp"
#include "cmcp/evaluation.hpp"
#include "cmcp/variation.hpp"
#include "cmcp/ranking.hpp"
#include "cmcp/front.hpp"
#include "cmcp/pdga.hpp"
#include "cmcp/nsga2.hpp"
#include "cmcp/oracle.hpp"
#include "cmcp/config.hpp"
#include "cmcp/experiment.hpp"
