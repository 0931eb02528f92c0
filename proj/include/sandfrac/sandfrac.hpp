#ifndef SANDFRAC_SANDFRAC_HPP
#define SANDFRAC_SANDFRAC_HPP

#include "sandfrac/anfis_train.hpp"
#include "sandfrac/bell.hpp"
#include "sandfrac/clustering.hpp"
#include "sandfrac/csv_io.hpp"
#include "sandfrac/cube.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/feature_selection.hpp"
#include "sandfrac/fis_builder.hpp"
#include "sandfrac/metrics.hpp"
#include "sandfrac/mlp.hpp"
#include "sandfrac/model_io.hpp"
#include "sandfrac/normalize.hpp"
#include "sandfrac/prep.hpp"
#include "sandfrac/rng.hpp"
#include "sandfrac/spline.hpp"
#include "sandfrac/synth.hpp"
#include "sandfrac/tsk_model.hpp"
#include "sandfrac/volume.hpp"

#endif  // SANDFRAC_SANDFRAC_HPP
