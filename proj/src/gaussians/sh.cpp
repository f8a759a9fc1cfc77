namespace gssr {}
