#pragma once

#include "ssg/ancestor.hpp"
#include "ssg/consistency.hpp"
#include "ssg/descendants.hpp"
#include "ssg/error.hpp"
#include "ssg/free_quotient.hpp"
#include "ssg/gfp.hpp"
#include "ssg/isomorphism.hpp"
#include "ssg/morphism.hpp"
#include "ssg/parallel.hpp"
#include "ssg/pc_presentation.hpp"
#include "ssg/quotient.hpp"
#include "ssg/series.hpp"
#include "ssg/sigma.hpp"
#include "ssg/subgroup.hpp"
#include "ssg/text_format.hpp"
#include "ssg/tower_cache.hpp"
