from ricbounds.main import main

main()
