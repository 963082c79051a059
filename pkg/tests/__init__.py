# Test suite for catdual
