#pragma once

#include "visrec/base64.hpp"
#include "visrec/classifier.hpp"
#include "visrec/client.hpp"
#include "visrec/cnn.hpp"
#include "visrec/contours.hpp"
#include "visrec/dataset.hpp"
#include "visrec/discovery.hpp"
#include "visrec/error.hpp"
#include "visrec/image.hpp"
#include "visrec/protocol.hpp"
#include "visrec/segmentation.hpp"
#include "visrec/server.hpp"
