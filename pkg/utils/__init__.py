# Utils package: configuration, session memo, caches, exports, parsing and exact arithmetic
