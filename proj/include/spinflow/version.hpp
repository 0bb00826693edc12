#pragma once

#define SPINFLOW_VERSION "0.1.0"
